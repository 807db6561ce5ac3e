//! Host crate for the `acceptance` test target. It runs the shipped
//! experiment configs end to end and prints one verdict per criterion.
