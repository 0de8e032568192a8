pub mod exact_linalg;
pub mod peirce;
pub mod commrel;
pub mod coordinatize;
pub mod quasigroup;
pub mod corpus;
pub mod suite;
