pub mod bounds;
pub mod element;
pub mod enumeration;
pub mod equations;
pub mod groebner;
pub(crate) mod linalg;
pub mod monomials;
pub mod poly;
pub mod presentation;
pub mod rational;
pub mod roundtrip;
pub mod series;
