use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lieval::linfp::{dense_rank, rank, Field, Fp, Fq, SparseMat};
use lieval::padicgroups::{OmegaValue, SlGroup};
use lieval::rootsys::RootSystem;

const TYPES: [&str; 10] = ["A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2", "F4"];

fn small_matrix() -> impl Strategy<Value = (u32, Vec<Vec<u32>>)> {
    (prop::sample::select(vec![2u32, 3, 5, 7]), 1usize..7, 1usize..7).prop_flat_map(|(p, r, c)| {
        (Just(p), prop::collection::vec(prop::collection::vec(0..p, c), r))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn extension_field_axioms(pm in prop::sample::select(vec![(2u32, 3u32), (3, 2), (5, 2), (7, 2), (2, 5)]), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = Fq::new(pm.0, pm.1).unwrap();
        let q = f.order() as u32;
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a)), f.one());
        }
        // Frobenius is a ring map of order m
        prop_assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.frobenius(a, pm.1), a);
        prop_assert_eq!(f.pow(a, q as u64), a);
    }

    #[test]
    fn rank_is_permutation_invariant((p, rows) in small_matrix(), seed in any::<u64>()) {
        let f = Fp::new(p).unwrap();
        let (r, c) = (rows.len(), rows[0].len());
        let m = SparseMat::from_dense(&f, &rows);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rp: Vec<usize> = (0..r).collect();
        let mut cp: Vec<usize> = (0..c).collect();
        rand::seq::SliceRandom::shuffle(&mut rp[..], &mut rng);
        rand::seq::SliceRandom::shuffle(&mut cp[..], &mut rng);
        let k = rank(&f, &m);
        prop_assert_eq!(k, dense_rank(&f, rows.clone(), c));
        prop_assert_eq!(k, rank(&f, &m.permuted(&f, &rp, &cp)));
        prop_assert_eq!(k, rank(&f, &m.transpose()));
        prop_assert!(k <= r.min(c));
    }

    #[test]
    fn length_polynomial_is_palindromic_of_weyl_order(name in prop::sample::select(TYPES.to_vec())) {
        let rs = RootSystem::from_name(name).unwrap();
        let l = rs.length_polynomial();
        let reversed: Vec<u64> = l.iter().rev().copied().collect();
        prop_assert_eq!(&l, &reversed);
        prop_assert_eq!(l.len() - 1, rs.num_positive());
        let exterior = rs.exterior_poincare();
        prop_assert_eq!(exterior.iter().sum::<u64>(), 1 << rs.rank());
        prop_assert_eq!(exterior.len() - 1, rs.exponents.iter().map(|m| 2 * *m as usize + 1).sum::<usize>());
    }

    #[test]
    fn omega_is_a_filtration(n in 2usize..=3, p in prop::sample::select(vec![5u64, 7]), seed in any::<u64>()) {
        let g = SlGroup::new(n, p, 12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = g.random_element(&mut rng).unwrap().matrix;
        let y = g.random_element(&mut rng).unwrap().matrix;
        let (wx, wy) = (g.omega(&x).unwrap(), g.omega(&y).unwrap());
        prop_assert_eq!(wx, g.omega_by_entries(&x).unwrap());
        prop_assert_eq!(g.omega(&x.inverse().unwrap()).unwrap(), wx);
        prop_assert!(g.omega(&x.mul(&y).unwrap()).unwrap() >= wx.min(wy));
        let c = g.omega(&x.commutator(&y).unwrap()).unwrap();
        if let (Some(a), Some(b)) = (wx.units(), wy.units()) {
            prop_assert!(c >= OmegaValue::Finite(a + b));
        }
        // the Iwahori factorization reassembles the element
        let factors = g.iwahori_factor(&x).unwrap();
        prop_assert_eq!(g.product(&factors).unwrap(), x);
    }
}
