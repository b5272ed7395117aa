//! Exact constructors for the reference maps and the doubling operator.
//!
//! * `F0`: the flip `x ↦ 1 − x`.
//! * `Gn(n)`: `n` up-bumps on the grid `i/n`, the i-th peaking at the cell
//!   midpoint with height `min(n, i+1)/n`. `Gn(0)` is the identity.
//! * `Plateau`: `2x` on `[0, 1/2]`, constant 1 afterwards.
//! * `Tent`: the full tent map.
//! * `Doubled { base, times }`: `times` applications of [`double`].

use serde::{Deserialize, Serialize};

use crate::exactnum::Rational;
use crate::plmap::PLMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    F0,
    Gn { n: u32 },
    Plateau,
    Tent,
    Doubled { base: Box<FamilySpec>, times: u32 },
}

pub fn make(spec: &FamilySpec) -> PLMap {
    match spec {
        FamilySpec::F0 => PLMap::from_strs(&[("0", "1"), ("1", "0")]).expect("valid"),
        FamilySpec::Plateau => PLMap::from_strs(&[("0", "0"), ("1/2", "1"), ("1", "1")]).expect("valid"),
        FamilySpec::Tent => PLMap::from_strs(&[("0", "0"), ("1/2", "1"), ("1", "0")]).expect("valid"),
        FamilySpec::Gn { n } => gn(*n),
        FamilySpec::Doubled { base, times } => {
            let mut f = make(base);
            for _ in 0..*times {
                f = double(&f);
            }
            f
        }
    }
}

fn gn(n: u32) -> PLMap {
    if n == 0 {
        return PLMap::identity();
    }
    let n = i64::from(n);
    let mut pts = Vec::with_capacity(2 * n as usize + 1);
    for i in 1..=n {
        pts.push((Rational::new(i - 1, n), Rational::new(i - 1, n)));
        pts.push((Rational::new(2 * i - 1, 2 * n), Rational::new(n.min(i + 1), n)));
    }
    pts.push((Rational::one(), Rational::one()));
    PLMap::new(pts).expect("grid construction is a valid map")
}

/// The doubling operator: `2/3 + f(3x)/3` on `[0,1/3]`, linear on
/// `[1/3,2/3]` down to 0, and `x − 2/3` on `[2/3,1]`.
pub fn double(f: &PLMap) -> PLMap {
    let third = Rational::new(1, 3);
    let two_thirds = Rational::new(2, 3);
    let mut pts: Vec<(Rational, Rational)> = f
        .breakpoints()
        .iter()
        .map(|b| (&b.x * &third, &two_thirds + &b.y * &third))
        .collect();
    pts.push((two_thirds, Rational::zero()));
    pts.push((Rational::one(), third));
    PLMap::new(pts).expect("doubled map is a valid map")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::RInterval;
    use crate::fixstruct::{is_type1, max_chain, Type1Verdict};
    use crate::Limits;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn pairs(f: &PLMap) -> Vec<(String, String)> {
        f.breakpoints().iter().map(|b| (b.x.to_string(), b.y.to_string())).collect()
    }

    fn owned(v: &[(&str, &str)]) -> Vec<(String, String)> {
        v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn constructor_examples() {
        assert_eq!(pairs(&make(&FamilySpec::F0)), owned(&[("0", "1"), ("1", "0")]));
        assert_eq!(
            pairs(&make(&FamilySpec::Plateau)),
            owned(&[("0", "0"), ("1/2", "1"), ("1", "1")])
        );
        assert_eq!(
            pairs(&make(&FamilySpec::Gn { n: 2 })),
            owned(&[("0", "0"), ("1/4", "1"), ("1/2", "1/2"), ("3/4", "1"), ("1", "1")])
        );
        assert!(make(&FamilySpec::Gn { n: 0 }).is_identity());
        // the one-bump member coincides with the plateau map
        assert_eq!(make(&FamilySpec::Gn { n: 1 }), make(&FamilySpec::Plateau));
    }

    #[test]
    fn g2_covering_identity() {
        let g = make(&FamilySpec::Gn { n: 2 });
        assert_eq!(g.image(&RInterval::closed(r("0"), r("1/2"))).unwrap(), RInterval::unit());
        assert_eq!(
            g.image(&RInterval::closed(r("1/2"), r("1"))).unwrap(),
            RInterval::closed(r("1/2"), r("1"))
        );
    }

    #[test]
    fn gn_cells_map_as_drawn() {
        for n in 1..=6i64 {
            let g = make(&FamilySpec::Gn { n: n as u32 });
            assert_eq!(g.fixed_set().len() as i64, n + 1);
            for i in 1..=n {
                let cell = RInterval::closed(Rational::new(i - 1, n), Rational::new(i, n));
                let want = RInterval::closed(Rational::new(i - 1, n), Rational::new(n.min(i + 1), n));
                assert_eq!(g.image(&cell).unwrap(), want);
            }
        }
    }

    #[test]
    fn gn_chain_length_is_n() {
        for n in 1..=5u32 {
            let g = make(&FamilySpec::Gn { n });
            assert_eq!(is_type1(&g, &Limits::default()), Type1Verdict::Yes);
            assert_eq!(max_chain(&g, &Limits::default()).unwrap().0, n as usize);
        }
    }

    #[test]
    fn double_identity_branches() {
        let d = double(&PLMap::identity());
        assert_eq!(
            pairs(&d),
            owned(&[("0", "2/3"), ("1/3", "1"), ("2/3", "0"), ("1", "1/3")])
        );
        for k in 0..=6 {
            let t = Rational::new(k, 18);
            assert_eq!(d.eval(&t).unwrap(), &t + r("2/3"));
            let u = &t + r("2/3");
            assert_eq!(d.eval(&u).unwrap(), t);
        }
    }

    #[test]
    fn double_f0() {
        let d = double(&make(&FamilySpec::F0));
        assert_eq!(
            pairs(&d),
            owned(&[("0", "1"), ("1/3", "2/3"), ("2/3", "0"), ("1", "1/3")])
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn spec() -> impl Strategy<Value = FamilySpec> {
            prop_oneof![
                Just(FamilySpec::F0),
                Just(FamilySpec::Plateau),
                Just(FamilySpec::Tent),
                (0u32..5).prop_map(|n| FamilySpec::Gn { n }),
            ]
        }

        proptest! {
            #[test]
            fn doubling_conjugacy(s in spec(), times in 0u32..2, k in 0i64..=300) {
                let f = make(&FamilySpec::Doubled { base: Box::new(s), times });
                let d = double(&f);
                let t = Rational::new(k, 900);
                let three = Rational::integer(3);
                let dd = d.eval(&d.eval(&t).unwrap()).unwrap();
                prop_assert_eq!(&three * dd, f.eval(&(&three * &t)).unwrap());
            }
        }
    }
}
