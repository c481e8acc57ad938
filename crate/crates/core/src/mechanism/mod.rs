//! Single-player mechanisms given by payment vectors, and n-player affine maximizers.

mod affine;
mod complex;
mod network;
mod robust;
mod sensitivity;

use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;

pub use affine::{
    affine_indifference_complex, construct_multiplayer_robust, cube_to_product_index, lineality_reduce,
    multiplayer_cardinality_sensitivity, AffineMaximizer, LinealityReduction,
};
pub use complex::{indifference_complex, verify_complex_by_intersection, IndifferenceComplex};
pub use network::{arc_length, verify_zero_cycles, AllocationNetwork, ArcLength, CycleAudit};
pub use robust::{
    cardinality_certificate, cardinality_slices, construct_cardinality_robust, construct_hamming_robust,
    HammingConstruction,
};
pub use sensitivity::{
    cardinality_sensitivity, hamming_sensitivity, optimal_sensitivity, sensitivity, Method, Metric,
    OptimalSensitivity,
};

use crate::config::{bit_label, cube_config, PointConfiguration};
use crate::error::{Error, Result};
use crate::scalar::Rational;
use crate::subdivision::{regular_subdivision, Lifting, Subdivision};
use crate::tropical::{Coefficient, TropicalPolynomial};

/// A one-player mechanism: a payment for every bundle of `items` items,
/// indexed by the binary value of the bundle (first item most significant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mechanism {
    items: usize,
    payments: Vec<Rational>,
}

impl Mechanism {
    pub fn new(items: usize, payments: Vec<Rational>) -> Result<Self> {
        if !(1..=10).contains(&items) {
            return Err(Error::OutOfRange(format!("item count {items} not in 1..=10")));
        }
        if payments.len() != 1 << items {
            return Err(Error::DimensionMismatch { expected: 1 << items, got: payments.len() });
        }
        Ok(Mechanism { items, payments })
    }

    /// Payments with denominators at most 60 and numerators in `[-3·den, 3·den]`.
    pub fn random(items: usize, rng: &mut impl Rng) -> Result<Self> {
        let payments = (0..1usize << items)
            .map(|_| {
                let den: i64 = rng.gen_range(1..=60);
                let num: i64 = rng.gen_range(-3 * den..=3 * den);
                Rational::new(BigInt::from(num), BigInt::from(den))
            })
            .collect();
        Self::new(items, payments)
    }

    pub fn items(&self) -> usize {
        self.items
    }

    pub fn payments(&self) -> &[Rational] {
        &self.payments
    }

    pub fn payment(&self, bundle: usize) -> &Rational {
        &self.payments[bundle]
    }

    pub fn bundle_label(&self, bundle: usize) -> String {
        bit_label(&bundle_vector(self.items, bundle))
    }

    pub fn config(&self) -> Arc<PointConfiguration> {
        Arc::new(cube_config(self.items).expect("item count validated"))
    }

    /// `λ(a) = −p_a`.
    pub fn lifting(&self) -> Lifting {
        Lifting::new(self.payments.iter().map(|p| -p).collect())
    }

    pub fn subdivision(&self) -> Result<Subdivision> {
        regular_subdivision(&self.config(), &self.lifting())
    }
}

pub fn bundle_vector(items: usize, bundle: usize) -> Vec<i64> {
    (0..items).map(|j| ((bundle >> (items - 1 - j)) & 1) as i64).collect()
}

/// `u_p(θ) = max { θ·a − p_a }`.
pub fn utility_polynomial(mech: &Mechanism) -> TropicalPolynomial {
    let config = cube_config(mech.items).expect("item count validated");
    let coeffs = mech.payments.iter().map(|p| Coefficient::Finite(-p)).collect();
    TropicalPolynomial::new(config.points().to_vec(), coeffs).expect("cube support is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    pub(crate) fn counter() -> Mechanism {
        // Singletons cost 1/4, pairs 2/3, everything 5/6.
        let p = (0..8u32).map(|a| [rat(0, 1), rat(1, 4), rat(2, 3), rat(5, 6)][a.count_ones() as usize].clone());
        Mechanism::new(3, p.collect()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(Mechanism::new(2, vec![int(0); 3]).is_err());
        assert!(Mechanism::new(0, vec![int(0)]).is_err());
        assert_eq!(counter().bundle_label(5), "101");
    }

    #[test]
    fn utility_of_independent_sale() {
        let m = Mechanism::new(2, vec![int(0), int(1), int(1), int(2)]).unwrap();
        assert_eq!(utility_polynomial(&m).to_string(), "max{0, -1 + x2, -1 + x1, -2 + x1 + x2}");
        let one = Mechanism::new(1, vec![int(0), int(1)]).unwrap();
        assert_eq!(utility_polynomial(&one).to_string(), "max{0, -1 + x1}");
    }

    #[test]
    fn random_payments_have_small_denominators() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let m = Mechanism::random(3, &mut rng).unwrap();
        assert!(m.payments().iter().all(|p| *p.denom() <= BigInt::from(60)));
    }
}
