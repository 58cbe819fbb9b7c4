//! Holds the `acceptance` test target, which checks the `girko` library
//! against its acceptance criteria and prints one verdict per criterion.
