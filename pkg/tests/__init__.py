# ==============================================================================
# robustport v1.0: Robust Portfolio Selection with Learning
# tests/__init__.py - 테스트 패키지
# ==============================================================================

"""Test suite for robustport v1.0."""
