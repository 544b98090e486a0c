//! Test-set evaluation, error tables, and file emission.
