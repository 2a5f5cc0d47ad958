"""k-hyponormality analysis for 2-variable weighted shifts."""
