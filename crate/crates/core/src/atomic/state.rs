use std::fmt;

use crate::{Error, Result};

const L_LETTERS: [char; 7] = ['S', 'P', 'D', 'F', 'G', 'H', 'I'];

/// One fine-structure sublevel `|n, l, j, m_j⟩`.
///
/// `j` and `m_j` are half-integers, stored doubled so the type stays `Eq`
/// and hashable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RydbergState {
    n: u32,
    l: u32,
    j2: u32,
    m2: i32,
}

impl RydbergState {
    /// Builds a state from `j` and `m` given as plain numbers (e.g. `2.5`, `0.5`).
    pub fn new(n: u32, l: u32, j: f64, m: f64) -> Result<Self> {
        let j2 = (2.0 * j).round();
        let m2 = (2.0 * m).round();
        if (2.0 * j - j2).abs() > 1e-9 || (2.0 * m - m2).abs() > 1e-9 || j2 < 0.0 {
            return Err(Error::InvalidState(format!("j = {j}, m = {m} are not half-integers")));
        }
        Self::from_doubled(n, l, j2 as u32, m2 as i32)
    }

    pub fn from_doubled(n: u32, l: u32, j2: u32, m2: i32) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidState("n must be at least 1".into()));
        }
        if l >= n {
            return Err(Error::InvalidState(format!("l = {l} must be below n = {n}")));
        }
        if j2 != 2 * l + 1 && !(l > 0 && j2 == 2 * l - 1) {
            return Err(Error::InvalidState(format!("j = {j2}/2 incompatible with l = {l}")));
        }
        if m2.unsigned_abs() > j2 || (m2 - j2 as i32) % 2 != 0 {
            return Err(Error::InvalidState(format!("m = {m2}/2 incompatible with j = {j2}/2")));
        }
        Ok(Self { n, l, j2, m2 })
    }

    /// Stretched-free default: `m_j = 1/2`.
    pub fn with_lowest_m(n: u32, l: u32, j: f64) -> Result<Self> {
        Self::new(n, l, j, 0.5)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn j(&self) -> f64 {
        self.j2 as f64 / 2.0
    }

    pub fn m(&self) -> f64 {
        self.m2 as f64 / 2.0
    }

    pub fn j2(&self) -> u32 {
        self.j2
    }

    pub fn m2(&self) -> i32 {
        self.m2
    }

    /// Same `(l, j, m)` channel at a different `n`.
    pub fn with_n(&self, n: u32) -> Result<Self> {
        Self::from_doubled(n, self.l, self.j2, self.m2)
    }

    /// Term label such as `47D5/2`.
    pub fn label(&self) -> String {
        let letter = L_LETTERS
            .get(self.l as usize)
            .map(|c| c.to_string())
            .unwrap_or_else(|| format!("[l={}]", self.l));
        format!("{}{}{}/2", self.n, letter, self.j2)
    }
}

impl fmt::Display for RydbergState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} m={}/2", self.label(), self.m2)
    }
}

/// Electric-dipole selection rules: `Δl = ±1` and `Δm ∈ {0, ±1}`.
pub fn allowed_transition(a: &RydbergState, b: &RydbergState) -> bool {
    let dl = a.l as i64 - b.l as i64;
    let dm2 = (a.m2 - b.m2).abs();
    dl.abs() == 1 && dm2 <= 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_checked_at_construction() {
        assert!(RydbergState::new(47, 2, 2.5, 0.5).is_ok());
        assert!(RydbergState::new(3, 3, 3.5, 0.5).is_err());
        assert!(RydbergState::new(10, 2, 3.5, 0.5).is_err());
        assert!(RydbergState::new(10, 0, 0.5, 1.5).is_err());
        assert!(RydbergState::new(10, 0, 0.5, 1.0).is_err());
        assert!(RydbergState::new(10, 0, -0.5, 0.5).is_err());
        assert!(RydbergState::new(0, 0, 0.5, 0.5).is_err());
    }

    #[test]
    fn labels() {
        let s = RydbergState::new(47, 2, 2.5, 0.5).unwrap();
        assert_eq!(s.label(), "47D5/2");
        assert_eq!(s.to_string(), "47D5/2 m=1/2");
    }

    #[test]
    fn selection_rules() {
        let st = |l: u32, m: f64| RydbergState::new(10, l, l as f64 + 0.5, m).unwrap();
        assert!(allowed_transition(&st(2, 1.5), &st(1, 1.5)));
        assert!(allowed_transition(&st(2, 1.5), &st(1, 0.5)));
        assert!(!allowed_transition(&st(2, 1.5), &st(2, 0.5)));
        assert!(!allowed_transition(&st(0, -0.5), &st(1, 1.5)));
        assert!(!allowed_transition(&st(3, 0.5), &st(1, 0.5)));
    }
}
