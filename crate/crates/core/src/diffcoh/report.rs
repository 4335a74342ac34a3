//! Sample-based check reports shared by the verification routines.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Composite,
    Square,
    Exactness,
    Structure,
}

/// One verdict per arrow, square or node.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub samples: usize,
    pub passed: usize,
    pub failures: Vec<String>,
}

impl Check {
    pub fn ok(&self) -> bool {
        self.passed == self.samples
    }
}

pub(crate) type Verdict = Result<std::result::Result<(), String>>;

pub(crate) fn expect(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub(crate) struct Runner {
    pub rng: ChaCha8Rng,
    pub samples: usize,
    pub checks: Vec<Check>,
}

impl Runner {
    pub fn new(seed: u64, samples: usize) -> Self {
        Runner { rng: ChaCha8Rng::seed_from_u64(seed), samples, checks: Vec::new() }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::ok)
    }

    pub fn run(&mut self, name: &str, kind: CheckKind, mut f: impl FnMut(&mut ChaCha8Rng) -> Verdict) {
        let mut check = Check { name: name.to_string(), kind, samples: self.samples, passed: 0, failures: Vec::new() };
        for i in 0..self.samples {
            let outcome = match f(&mut self.rng) {
                Ok(v) => v,
                Err(e) => Err(e.to_string()),
            };
            match outcome {
                Ok(()) => check.passed += 1,
                Err(msg) if check.failures.len() < 5 => check.failures.push(format!("sample {i}: {msg}")),
                Err(_) => {}
            }
        }
        self.checks.push(check);
    }
}

