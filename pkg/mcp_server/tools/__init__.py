"""
MCP tool implementations organized by domain.
"""

from .scenario_tools import register_scenario_tools
from .planning_tools import register_planning_tools

__all__ = [
    "register_scenario_tools",
    "register_planning_tools",
]
