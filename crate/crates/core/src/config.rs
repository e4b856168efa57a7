use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    /// Working precision in bits.
    pub precision: u32,
    pub precision_cap: u32,
    pub degree_cap: u64,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { precision: 128, precision_cap: 8192, degree_cap: 256, seed: 0 }
    }
}

impl Config {
    pub fn with_precision(&self, bits: u32) -> Self {
        Config { precision: bits, ..self.clone() }
    }

    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }

    pub fn check_degree(&self, degree: u64) -> Result<()> {
        if degree > self.degree_cap {
            Err(Error::OverflowGuard { degree, cap: self.degree_cap })
        } else {
            Ok(())
        }
    }

    /// Precisions tried in order: the working precision doubled up to the cap.
    pub fn precision_ladder(&self) -> Vec<u32> {
        let mut v = Vec::new();
        let mut b = self.precision.max(32);
        while b <= self.precision_cap {
            v.push(b);
            b *= 2;
        }
        if v.is_empty() {
            v.push(self.precision_cap);
        }
        v
    }
}
