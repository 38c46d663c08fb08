use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// Two-component state in the σz eigenbasis `{|ψ+⟩, |ψ−⟩}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spinor {
    pub plus: C64,
    pub minus: C64,
}

/// One of the two σz eigenstates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinState {
    Plus,
    Minus,
}

impl SpinState {
    pub fn flipped(self) -> Self {
        match self {
            SpinState::Plus => SpinState::Minus,
            SpinState::Minus => SpinState::Plus,
        }
    }
}

impl std::fmt::Display for SpinState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SpinState::Plus => "plus",
            SpinState::Minus => "minus",
        })
    }
}

impl Spinor {
    pub const fn new(plus: C64, minus: C64) -> Self {
        Self { plus, minus }
    }

    pub const fn up() -> Self {
        Self::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    pub const fn down() -> Self {
        Self::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0))
    }

    pub fn basis(state: SpinState) -> Self {
        match state {
            SpinState::Plus => Self::up(),
            SpinState::Minus => Self::down(),
        }
    }

    pub fn component(&self, state: SpinState) -> C64 {
        match state {
            SpinState::Plus => self.plus,
            SpinState::Minus => self.minus,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.plus.norm_sqr() + self.minus.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Spinor) -> C64 {
        self.plus.conj() * other.plus + self.minus.conj() * other.minus
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self::new(self.plus / n, self.minus / n)
    }

    pub fn scale(&self, k: C64) -> Self {
        Self::new(self.plus * k, self.minus * k)
    }

    pub fn add(&self, other: &Spinor) -> Self {
        Self::new(self.plus + other.plus, self.minus + other.minus)
    }

    pub fn sub(&self, other: &Spinor) -> Self {
        Self::new(self.plus - other.plus, self.minus - other.minus)
    }

    /// Probability of finding the spin in `state`.
    pub fn probability(&self, state: SpinState) -> f64 {
        self.component(state).norm_sqr()
    }
}

/// 2×2 complex matrix, row-major.
pub type Matrix2 = [[C64; 2]; 2];

pub fn mat_vec(m: &Matrix2, v: &Spinor) -> Spinor {
    Spinor::new(
        m[0][0] * v.plus + m[0][1] * v.minus,
        m[1][0] * v.plus + m[1][1] * v.minus,
    )
}
