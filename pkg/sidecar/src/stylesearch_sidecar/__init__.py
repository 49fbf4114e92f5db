from .app import create_app
from .backends import Backend, StubBackend, TransformersBackend, build_backend
from .config import SidecarConfig

__all__ = [
    "Backend",
    "SidecarConfig",
    "StubBackend",
    "TransformersBackend",
    "build_backend",
    "create_app",
]
