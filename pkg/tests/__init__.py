"""
Test package for trajectory-grpo-kit
"""

