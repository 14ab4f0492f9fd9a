"""Unit test package for firescope_kit."""
