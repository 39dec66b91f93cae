"""
Storage package.

File persistence for contribution panels, reports and distributions.
"""

from .panel_repository import PanelRepository, load_panel, save_panel
from .report_writer import ReportWriter

__all__ = [
    "PanelRepository",
    "ReportWriter",
    "load_panel",
    "save_panel",
]
