import logging
import sys

import click
from dotenv import load_dotenv

from .config import log_level_from_env
from .errors import ConfigError

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level):
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def create_app():
    load_dotenv()

    @click.group(name="mle-elim", help="Exact elimination tools for likelihood equations of algebraic models.")
    @click.pass_context
    def app(ctx):
        try:
            configure_logging(log_level_from_env())
        except ConfigError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(2)

    # Import and register commands here to avoid circular imports
    from . import commands
    commands.register_commands(app)

    return app
