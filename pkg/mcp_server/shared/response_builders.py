"""
Standardized response building utilities for MCP tools.
"""

from typing import Any, Dict, List, Optional

from city.serialization import json_safe


class ResponseBuilder:
    """Consistent success shapes; values are made JSON-safe (no NaN or inf)."""

    @staticmethod
    def success_response(
        data: Dict[str, Any],
        metadata: Optional[Dict[str, Any]] = None,
        message: Optional[str] = None
    ) -> Dict[str, Any]:
        """
        Build a successful operation response.

        Args:
            data: Primary response data
            metadata: Optional metadata dictionary
            message: Optional success message

        Returns:
            Standardized success response
        """
        response = {"success": True, **json_safe(data)}
        if metadata:
            response["metadata"] = json_safe(metadata)
        if message:
            response["message"] = message
        return response

    @staticmethod
    def validation_response(
        valid: bool,
        errors: List[str],
        suggestions: List[str],
        normalized: Optional[Dict[str, Any]] = None
    ) -> Dict[str, Any]:
        response = {
            "valid": valid,
            "errors": errors,
            "suggestions": suggestions,
        }
        if normalized is not None:
            response["normalized"] = normalized
        return response

    @staticmethod
    def planning_response(
        path: Dict[str, Any],
        metrics: Dict[str, Any],
        stats: Dict[str, Any],
        planner: str
    ) -> Dict[str, Any]:
        """
        Build a planning result: the path, its metrics and the search statistics.
        """
        return {
            "success": True,
            "planner": planner,
            "feasible": not metrics.get("violations"),
            "path": json_safe(path),
            "metrics": json_safe(metrics),
            "stats": json_safe(stats),
        }

    @staticmethod
    def list_response(
        items: List[Dict[str, Any]],
        total_count: Optional[int] = None
    ) -> Dict[str, Any]:
        response = {"items": json_safe(items), "count": len(items)}
        if total_count is not None:
            response["total_count"] = total_count
        return response
