# Tests package for the mismatched LRT exponent toolkit
