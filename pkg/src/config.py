"""Configuration module for the Meta-Termination MCP Server."""
import os
import logging
from dataclasses import dataclass
from dotenv import load_dotenv

from .services.engine import Budget

logger = logging.getLogger(__name__)


@dataclass
class MetaTerminationConfig:
    """Configuration for the Meta-Termination MCP Server and cli."""
    max_nodes: int = 10_000
    max_depth: int = 200
    coefficient_bound: int = 10
    search_node_limit: int = 5000
    tpi_powers: int = 12
    tpi_atom_limit: int = 2000
    corpus_workers: int = 4
    log_level: str = "INFO"

    @classmethod
    def load_from_env(cls) -> 'MetaTerminationConfig':
        """Load configuration from environment variables or .env file.

        Returns:
            MetaTerminationConfig instance

        Raises:
            ValueError: If a limit is not a positive integer
        """
        load_dotenv()

        config = cls(
            max_nodes=cls._parse_positive('META_MAX_NODES', 10_000),
            max_depth=cls._parse_positive('META_MAX_DEPTH', 200),
            coefficient_bound=cls._parse_positive('META_COEFFICIENT_BOUND', 10),
            search_node_limit=cls._parse_positive('META_SEARCH_NODE_LIMIT', 5000),
            tpi_powers=cls._parse_positive('META_TPI_POWERS', 12),
            tpi_atom_limit=cls._parse_positive('META_TPI_ATOM_LIMIT', 2000),
            corpus_workers=cls._parse_positive('META_CORPUS_WORKERS', 4),
            log_level=os.getenv('LOG_LEVEL', 'INFO').upper(),
        )
        logger.debug(f"Loaded configuration: {config}")
        return config

    @staticmethod
    def _parse_positive(name: str, default: int) -> int:
        """Parse a positive integer from an environment variable."""
        raw = os.getenv(name)
        if raw is None or not raw.strip():
            return default
        try:
            value = int(raw)
        except ValueError:
            value = 0
        if value <= 0:
            error_msg = f"{name} must be a positive integer, got '{raw}'"
            logger.error(error_msg)
            raise ValueError(error_msg)
        return value

    def budget(self) -> Budget:
        return Budget(self.max_nodes, self.max_depth)
