"""Desk-scale examples for continuous groups: truncated representations of D(SU(2))
and the conjugacy classes of SL(2, R)."""
