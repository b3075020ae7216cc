pub mod coeffs;
pub mod linalg;
pub mod freealg;
pub mod series;
pub mod groebner;
pub mod tensorlat;
pub mod search;
