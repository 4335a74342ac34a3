//! Differential cochains `(c, h, ω)` of degree `n` relative to a truncation degree `m`.

use serde::{Deserialize, Serialize};

use crate::cells::{CellComplex, CellularMap, Cochain};
use crate::error::{Error, Result};
use crate::io::{rationals_from_json, rationals_to_json};

/// `c ∈ C^n(K; Z)`, `h ∈ C^{n-1}(K; Q)` and `ω ∈ σ^{≥m} C^n(K; Q)`. Below the
/// truncation degree `ω` is stored as the zero cochain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialCochain {
    pub m: i64,
    pub n: i64,
    pub c: Cochain,
    pub h: Cochain,
    pub omega: Cochain,
}

impl DifferentialCochain {
    pub fn new(m: i64, c: Cochain, h: Cochain, omega: Cochain) -> Result<Self> {
        let n = c.degree;
        if h.degree != n - 1 || omega.degree != n {
            return Err(Error::InvalidCochain(format!(
                "components have degrees ({}, {}, {}), expected ({n}, {}, {n})",
                c.degree,
                h.degree,
                omega.degree,
                n - 1
            )));
        }
        if !c.is_integral() {
            return Err(Error::InvalidCochain("the integral component has non-integer values".into()));
        }
        if n < m && !omega.is_zero() {
            return Err(Error::InvalidCochain(format!("the form component must vanish in degree {n} < {m}")));
        }
        Ok(DifferentialCochain { m, n, c, h, omega })
    }

    pub fn zero(k: &CellComplex, m: i64, n: i64) -> Self {
        DifferentialCochain { m, n, c: Cochain::zero(k, n), h: Cochain::zero(k, n - 1), omega: Cochain::zero(k, n) }
    }

    /// Checks that the component sizes match `k`.
    pub fn check(&self, k: &CellComplex) -> Result<()> {
        k.check(&self.c)?;
        k.check(&self.h)?;
        k.check(&self.omega)
    }

    fn zip(&self, other: &Self, f: impl Fn(&Cochain, &Cochain) -> Cochain) -> Self {
        assert_eq!((self.m, self.n), (other.m, other.n), "combining differential cochains of different type");
        DifferentialCochain { m: self.m, n: self.n, c: f(&self.c, &other.c), h: f(&self.h, &other.h), omega: f(&self.omega, &other.omega) }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, Cochain::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, Cochain::sub)
    }

    pub fn neg(&self) -> Self {
        DifferentialCochain { m: self.m, n: self.n, c: self.c.neg(), h: self.h.neg(), omega: self.omega.neg() }
    }

    /// Componentwise pullback along a cellular map.
    pub fn pullback(&self, f: &CellularMap) -> Result<Self> {
        Ok(DifferentialCochain { m: self.m, n: self.n, c: f.pullback(&self.c)?, h: f.pullback(&self.h)?, omega: f.pullback(&self.omega)? })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DifferentialCochainJson {
            m: self.m,
            n: self.n,
            c: rationals_to_json(&self.c.values),
            h: rationals_to_json(&self.h.values),
            omega: rationals_to_json(&self.omega.values),
        })
        .expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let raw: DifferentialCochainJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        DifferentialCochain::new(
            raw.m,
            Cochain::new(raw.n, rationals_from_json(&raw.c)?),
            Cochain::new(raw.n - 1, rationals_from_json(&raw.h)?),
            Cochain::new(raw.n, rationals_from_json(&raw.omega)?),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct DifferentialCochainJson {
    m: i64,
    n: i64,
    c: serde_json::Value,
    h: serde_json::Value,
    omega: serde_json::Value,
}
