//! Search bounds shared by the bounded procedures.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest conductor scanned by cover searches.
    pub conductor: u64,
    /// Largest prime tried when picking auxiliary or witness primes.
    pub prime_scan: u64,
    /// Largest number of witness primes tried.
    pub support: usize,
    /// Largest ambient rank of value groups accepted from input.
    pub ambient_rank: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { conductor: 2000, prime_scan: 500, support: 4, ambient_rank: 3 }
    }
}
