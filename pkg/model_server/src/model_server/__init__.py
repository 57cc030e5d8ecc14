"""HTTP sidecar serving embedding, tagging, classification and reformulation."""

from .app import create_app
from .config import ServerConfig

__all__ = ["ServerConfig", "create_app"]
__version__ = "0.1.0"
