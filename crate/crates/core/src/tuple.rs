//! Eulerian tuples of squares: the pair identity, verifiers, and the
//! parameterization of `(x^2+1)t^2 + x^2 = square`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// `a*b + a + b`.
pub fn pair_val(a: &Rat, b: &Rat) -> Rat {
    a * b + a + b
}

/// `t = 2xr / (x^2 + 1 - r^2)`; `(x^2+1)t^2 + x^2` is then a square.
pub fn param_t(x: &Rat, r: &Rat) -> Result<Rat> {
    let den = x.square() + Rat::one() - r.square();
    if den.is_zero() {
        return Err(Error::Pole(format!("r^2 = x^2 + 1 at x = {x}, r = {r}")));
    }
    Ok(Rat::int(2) * x * r / den)
}

/// Candidate tuple `{t1^2, ..., tm^2}`, stored by its square roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SquareTuple {
    roots: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairReport {
    pub i: usize,
    pub j: usize,
    pub value: Rat,
    pub square: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub root: Option<Rat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Eulerian,
    NotEulerian,
    /// A zero root or two roots of equal absolute value.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub pairs: Vec<PairReport>,
}

impl Verdict {
    pub fn is_eulerian(&self) -> bool {
        self.status == Status::Eulerian
    }

    pub fn square_count(&self) -> usize {
        self.pairs.iter().filter(|p| p.square).count()
    }
}

impl PairReport {
    fn new(i: usize, j: usize, value: Rat) -> PairReport {
        let root = value.sqrt_exact().ok();
        PairReport {
            i,
            j,
            square: root.is_some(),
            value,
            root,
        }
    }
}

impl SquareTuple {
    pub fn new(roots: Vec<Rat>) -> Result<SquareTuple> {
        if roots.len() < 2 {
            return Err(Error::Arity {
                expected: 2,
                got: roots.len(),
            });
        }
        Ok(SquareTuple { roots })
    }

    /// Builds a tuple from its squares; each entry must be a rational square.
    pub fn from_squares(squares: &[Rat]) -> Result<SquareTuple> {
        let roots = squares.iter().map(Rat::sqrt_exact).collect::<Result<Vec<_>>>()?;
        SquareTuple::new(roots)
    }

    pub fn roots(&self) -> &[Rat] {
        &self.roots
    }

    pub fn squares(&self) -> Vec<Rat> {
        self.roots.iter().map(Rat::square).collect()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Why the tuple is degenerate, if it is.
    pub fn degeneracy(&self) -> Option<String> {
        if let Some(i) = self.roots.iter().position(Rat::is_zero) {
            return Some(format!("root {i} is zero"));
        }
        for i in 0..self.roots.len() {
            for j in i + 1..self.roots.len() {
                if self.roots[i].abs() == self.roots[j].abs() {
                    return Some(format!("roots {i} and {j} give the same square"));
                }
            }
        }
        None
    }

    /// The same tuple with roots replaced by their absolute values, sorted ascending.
    pub fn canonical(&self) -> SquareTuple {
        let mut roots: Vec<Rat> = self.roots.iter().map(Rat::abs).collect();
        roots.sort();
        SquareTuple { roots }
    }

    /// Checks every pair `ti^2 * tj^2 + ti^2 + tj^2` for squareness.
    pub fn verify(&self) -> Verdict {
        let sq = self.squares();
        let mut pairs = Vec::with_capacity(sq.len() * (sq.len() - 1) / 2);
        for i in 0..sq.len() {
            for j in i + 1..sq.len() {
                pairs.push(PairReport::new(i, j, pair_val(&sq[i], &sq[j])));
            }
        }
        let status = if self.degeneracy().is_some() {
            Status::Degenerate
        } else if pairs.iter().all(|p| p.square) {
            Status::Eulerian
        } else {
            Status::NotEulerian
        };
        Verdict { status, pairs }
    }

    pub fn is_eulerian(&self) -> bool {
        self.verify().is_eulerian()
    }

    /// Whether `ti^2 * tj^2 + tk^2` is a square for each choice of the third element.
    pub fn product_plus_third(&self) -> Result<bool> {
        Ok(self.product_plus_third_values()?.iter().all(Rat::is_square))
    }

    pub fn product_plus_third_values(&self) -> Result<[Rat; 3]> {
        if self.roots.len() != 3 {
            return Err(Error::Arity {
                expected: 3,
                got: self.roots.len(),
            });
        }
        let s = self.squares();
        Ok([
            &s[0] * &s[1] + &s[2],
            &s[0] * &s[2] + &s[1],
            &s[1] * &s[2] + &s[0],
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn tuple(roots: &[Rat]) -> SquareTuple {
        SquareTuple::new(roots.to_vec()).unwrap()
    }

    #[test]
    fn pair_val_examples() {
        let v = pair_val(&q(25, 9), &q(64, 9));
        assert_eq!(v, q(2401, 81));
        assert_eq!(v.sqrt_exact().unwrap(), q(49, 9));
        assert_eq!(pair_val(&Rat::zero(), &q(7, 3)), q(7, 3));
        assert_eq!(pair_val(&Rat::int(4), &Rat::int(441)), Rat::int(2209));
        assert_eq!(pair_val(&Rat::int(4), &q(64, 361)), q(1764, 361));
    }

    #[test]
    fn eulerian_examples() {
        assert!(tuple(&[q(5, 3), q(8, 3), q(14, 3)]).is_eulerian());
        assert!(tuple(&[Rat::int(2), q(8, 19), Rat::int(21)]).is_eulerian());
        let quad = tuple(&[Rat::int(18), q(3, 5), q(8, 5), q(224, 107)]).verify();
        assert_eq!(quad.status, Status::Eulerian);
        assert_eq!(quad.pairs.len(), 6);
        let v = tuple(&[Rat::int(1), Rat::int(3)]).verify();
        assert_eq!(v.status, Status::NotEulerian);
        assert_eq!(v.pairs[0].value, Rat::int(19));
    }

    #[test]
    fn degenerate_tuples_are_flagged() {
        let v = tuple(&[Rat::int(1), Rat::int(1)]).verify();
        assert_eq!(v.status, Status::Degenerate);
        assert_eq!(v.pairs[0].value, Rat::int(3));
        assert!(!v.pairs[0].square);
        assert_eq!(tuple(&[Rat::int(3), Rat::int(-3)]).verify().status, Status::Degenerate);
        assert_eq!(tuple(&[Rat::zero(), Rat::int(2)]).verify().status, Status::Degenerate);
        assert!(SquareTuple::new(vec![Rat::one()]).is_err());
    }

    #[test]
    fn report_roots_present_iff_square() {
        let v = tuple(&[Rat::int(2), q(8, 19), Rat::int(3)]).verify();
        for p in &v.pairs {
            assert_eq!(p.square, p.root.is_some());
            if let Some(r) = &p.root {
                assert_eq!(&r.square(), &p.value);
            }
        }
        assert_eq!(v.pairs[0].root, Some(q(42, 19)));
    }

    #[test]
    fn product_plus_third_examples() {
        let d = tuple(&[q(5, 3), q(8, 3), q(14, 3)]);
        assert!(d.product_plus_third().unwrap());
        assert_eq!(d.product_plus_third_values().unwrap()[0], q(3364, 81));
        // The x = 2 family triple: computed, not required to hold.
        let vals = tuple(&[Rat::int(2), q(8, 19), Rat::int(21)])
            .product_plus_third_values()
            .unwrap();
        assert_eq!(vals, [q(256 + 159201, 361), q(1764 * 361 + 64, 361), q(64 * 441 + 1444, 361)]);
        // 1*4 + 9 = 13
        assert!(!tuple(&[Rat::int(1), Rat::int(2), Rat::int(3)]).product_plus_third().unwrap());
        assert!(matches!(
            tuple(&[Rat::int(1), Rat::int(2)]).product_plus_third(),
            Err(Error::Arity { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn param_t_examples() {
        let t = param_t(&Rat::int(2), &q(1, 2)).unwrap();
        assert_eq!(t, q(8, 19));
        assert_eq!((Rat::int(5) * t.square() + Rat::int(4)).sqrt_exact().unwrap(), q(42, 19));
        assert_eq!(param_t(&Rat::int(2), &q(15, 7)).unwrap(), Rat::int(21));
        assert_eq!(param_t(&Rat::int(18), &Rat::int(5)).unwrap(), q(3, 5));
        assert_eq!(param_t(&Rat::int(18), &Rat::int(10)).unwrap(), q(8, 5));
        assert_eq!(param_t(&Rat::int(18), &q(91, 8)).unwrap(), q(224, 107));
        assert_eq!(param_t(&q(7, 3), &Rat::zero()).unwrap(), Rat::zero());
        assert!(matches!(param_t(&q(3, 4), &q(5, 4)), Err(Error::Pole(_))));
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-10_000i64..10_000, 1i64..10_000).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn pair_val_is_shifted_product(a in arb_rat(), b in arb_rat()) {
            let one = Rat::one();
            prop_assert_eq!(pair_val(&a, &b), (&a + &one) * (&b + &one) - one);
            prop_assert_eq!(pair_val(&a, &b), pair_val(&b, &a));
        }

        #[test]
        fn param_t_gives_squares(x in arb_rat(), r in arb_rat()) {
            if let Ok(t) = param_t(&x, &r) {
                let x2 = x.square();
                let v = (&x2 + Rat::one()) * t.square() + &x2;
                let den = &x2 + Rat::one() - r.square();
                let expected = ((&x2 + Rat::one() + r.square()) * &x / den).square();
                prop_assert!(v.is_square());
                prop_assert_eq!(v, expected);
            }
        }
    }

    proptest! {
        #[test]
        fn verdict_is_permutation_invariant(seed in 0usize..24) {
            let mut roots = vec![Rat::int(18), q(3, 5), q(8, 5), q(224, 107)];
            // Walk the 24 permutations via the factorial number system.
            let mut k = seed;
            for i in (1..roots.len()).rev() {
                roots.swap(i, k % (i + 1));
                k /= i + 1;
            }
            prop_assert!(tuple(&roots).is_eulerian());
            roots[1] = q(2, 5);
            prop_assert!(!tuple(&roots).is_eulerian());
        }
    }
}
