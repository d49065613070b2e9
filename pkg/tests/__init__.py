"""Tests for Agent PDF2LaTeX"""

