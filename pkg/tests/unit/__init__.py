"""
Unit tests for trajectory-grpo-kit
"""

