"""
Command-line interface (console script ``trajectory-grpo``).
"""

from .main import build_parser, main

__all__ = ['build_parser', 'main']
