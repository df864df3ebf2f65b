"""ns2d_bdf2.utils package."""
