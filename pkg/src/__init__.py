"""Termination analysis lab for logic meta-programs, served over MCP."""
from .config import MetaTerminationConfig
from .server import MetaTerminationMCPServer

__version__ = "1.0.0"
__all__ = ['MetaTerminationConfig', 'MetaTerminationMCPServer']
