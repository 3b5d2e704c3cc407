"""likelihood_service package init"""
from likelihood_service.app import create_app
