from .app import KB_PATH_ENV, create_app

__all__ = ["create_app", "KB_PATH_ENV"]
