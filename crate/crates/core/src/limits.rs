// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Default bound on the number of free variables any enumeration may range
/// over.
pub const DEFAULT_MAX_FREE: usize = 16;

#[derive(Error, Debug, Clone, Copy, PartialEq, Eq)]
#[error("enumeration over {requested} variables exceeds the cap of {cap}")]
pub struct CapExceeded {
    pub requested: usize,
    pub cap: usize,
}

/// Resource bounds for the desk-scale enumeration engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_free: usize,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            max_free: DEFAULT_MAX_FREE,
        }
    }
}

impl Limits {
    pub fn with_max_free(max_free: usize) -> Limits {
        Limits { max_free }
    }

    pub fn check(&self, requested: usize) -> Result<(), CapExceeded> {
        // shifts by 64 or more would overflow the enumeration counters
        let cap = self.max_free.min(40);
        if requested > cap {
            Err(CapExceeded { requested, cap })
        } else {
            Ok(())
        }
    }
}
