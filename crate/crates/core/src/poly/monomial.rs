use super::context::Variable;

/// Dense exponent vector indexed by context position.
///
/// The derived ordering is lexicographic with variable 0 most significant; it
/// is only used as the canonical storage order of polynomial terms. Monomial
/// orders proper live in [`super::MonomialOrder`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    pub fn var(nvars: usize, v: Variable, e: u32) -> Self {
        let mut exps = vec![0; nvars];
        exps[v.0] = e;
        Monomial(exps.into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponent(&self, v: Variable) -> u32 {
        self.0[v.0]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect()))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub(crate) fn with_exponent(&self, v: Variable, e: u32) -> Monomial {
        let mut exps = self.0.clone();
        exps[v.0] = e;
        Monomial(exps)
    }
}
