"""Standard monomial theory for the C* and SL_n cases."""
