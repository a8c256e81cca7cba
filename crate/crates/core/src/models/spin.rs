use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

/// An Ising spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(i8)]
pub enum Spin {
    Down = -1,
    Up = 1,
}

impl Spin {
    #[inline]
    pub fn value(self) -> f64 {
        self as i8 as f64
    }

    #[inline]
    pub fn as_i8(self) -> i8 {
        self as i8
    }

    /// `Down` when `minus` holds.
    #[inline]
    pub fn from_minus_bit(minus: bool) -> Self {
        if minus {
            Spin::Down
        } else {
            Spin::Up
        }
    }

    pub fn from_i8(v: i8) -> Option<Self> {
        match v {
            1 => Some(Spin::Up),
            -1 => Some(Spin::Down),
            _ => None,
        }
    }
}

impl Neg for Spin {
    type Output = Spin;
    #[inline]
    fn neg(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }
}

impl Mul for Spin {
    type Output = Spin;
    #[inline]
    fn mul(self, rhs: Spin) -> Spin {
        if self == rhs {
            Spin::Up
        } else {
            Spin::Down
        }
    }
}

/// One spin per site of a volume, in the volume's enumeration order.
///
/// Configurations are numbered by the bit pattern `index`, bit `i` set
/// meaning `σ_i = +1`; index 0 is all-minus and `2^n − 1` is all-plus, so
/// reversing a table of configurations is the global spin flip.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinConfiguration(Vec<Spin>);

impl SpinConfiguration {
    pub fn new(values: Vec<Spin>) -> Self {
        SpinConfiguration(values)
    }

    pub fn uniform(n: usize, spin: Spin) -> Self {
        SpinConfiguration(vec![spin; n])
    }

    pub fn from_index(n: usize, index: u64) -> Self {
        SpinConfiguration(
            (0..n)
                .map(|i| Spin::from_minus_bit((index >> i) & 1 == 0))
                .collect(),
        )
    }

    pub fn index(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Spin::Up)
            .fold(0u64, |acc, (i, _)| acc | (1 << i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn spins(&self) -> &[Spin] {
        &self.0
    }

    pub fn spins_mut(&mut self) -> &mut [Spin] {
        &mut self.0
    }

    pub fn flipped(&self) -> Self {
        SpinConfiguration(self.0.iter().map(|s| -*s).collect())
    }

    pub fn magnetization(&self) -> f64 {
        self.0.iter().map(|s| s.value()).sum::<f64>() / self.0.len() as f64
    }
}

impl From<Vec<Spin>> for SpinConfiguration {
    fn from(v: Vec<Spin>) -> Self {
        SpinConfiguration(v)
    }
}

impl std::ops::Index<usize> for SpinConfiguration {
    type Output = Spin;
    fn index(&self, i: usize) -> &Spin {
        &self.0[i]
    }
}
