"""HTTP service wrapping the simulator, agents, and assistant."""

from .app import FRAMES_CAP, ServiceConfig, create_app

__all__ = ["FRAMES_CAP", "ServiceConfig", "create_app"]
