"""Test package for spectraprune."""
