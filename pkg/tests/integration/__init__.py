"""
Integration tests for trajectory-grpo-kit
"""

