from .app import create_app, export_openapi

__all__ = ["create_app", "export_openapi"]
