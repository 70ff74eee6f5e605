use algwass::interval::{hom_dim, symmetric_difference_measure};
use algwass::module::{hilbert_bounds, hom_basis};
use algwass::structure::structure_from_interval;
use algwass::verify::{ordered_line, random_barcode, random_coefficients, random_interval, random_measure, rng, scrambled_module};
use algwass::wasserstein::{interval_zigzag, wasserstein_modules};
use algwass::coords::IntervalMorphism;
use algwass::{decompose, module_from_barcode, Barcode, Exponent, Field, LinearPoset, Orientation, PersistenceModule, Poset};
use proptest::prelude::*;
use std::sync::Arc;

fn line(mask: u32, n: usize) -> Arc<Poset> {
    let o = (0..n - 1)
        .map(|k| if mask >> k & 1 == 0 { Orientation::Forward } else { Orientation::Backward })
        .collect();
    Arc::new(Poset::Linear(LinearPoset::with_orientations(o)))
}

fn interval_module(poset: &Arc<Poset>, i: &algwass::Interval) -> Arc<PersistenceModule> {
    Arc::new(PersistenceModule::interval(Field::default(), poset.clone(), i).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hom_dimension_matches_solved_hom_space(n in 1usize..7, mask in any::<u32>(), seed in any::<u64>()) {
        let poset = line(mask, n);
        let mut g = rng(seed);
        let (i, j) = (random_interval(&mut g, n), random_interval(&mut g, n));
        let basis = hom_basis(&interval_module(&poset, &i), &interval_module(&poset, &j)).unwrap();
        prop_assert_eq!(basis.len(), hom_dim(&poset, &i, &j));
    }

    #[test]
    fn scrambled_modules_decompose_to_their_barcode(n in 1usize..7, mask in any::<u32>(), seed in any::<u64>()) {
        let poset = line(mask, n);
        let mut g = rng(seed);
        let b = random_barcode(&mut g, &poset, 5);
        let (m, _) = scrambled_module(&mut g, Field::default(), &b).unwrap();
        prop_assert_eq!(decompose(&m).unwrap(), b.clone());
        let (model, _) = module_from_barcode(Field::default(), &b).unwrap();
        prop_assert_eq!(model.dims(), m.dims());
    }

    #[test]
    fn distance_sits_between_hilbert_bounds(n in 2usize..12, seed in any::<u64>()) {
        let poset = ordered_line(n);
        let mut g = rng(seed);
        let mu = random_measure(&mut g, n);
        let (a, b) = (random_barcode(&mut g, &poset, 5), random_barcode(&mut g, &poset, 5));
        let (ma, _) = module_from_barcode(Field::default(), &a).unwrap();
        let (mb, _) = module_from_barcode(Field::default(), &b).unwrap();
        let (lo, hi) = hilbert_bounds(&ma, &mb, &mu).unwrap();
        let w1 = wasserstein_modules(Exponent::Finite(1), &ma, &mb, &mu).unwrap().distance;
        prop_assert!(w1.at_least(&lo) && w1.at_most(&hi));
    }

    #[test]
    fn single_interval_distance_is_symmetric_difference(n in 1usize..8, mask in any::<u32>(), seed in any::<u64>()) {
        let poset = line(mask, n);
        let mut g = rng(seed);
        let mu = random_measure(&mut g, n);
        let (i, j) = (random_interval(&mut g, n), random_interval(&mut g, n));
        let d = symmetric_difference_measure(Some(&i), Some(&j), &mu).unwrap();
        let z = interval_zigzag(Field::default(), &poset, Some(&i), Some(&j)).unwrap();
        prop_assert_eq!(z.cost(&mu).unwrap(), d.clone());
        prop_assert_eq!(z.reversed().cost(&mu).unwrap(), d.clone());
        let (bi, bj) = (Barcode::from_intervals(poset.clone(), [i]).unwrap(), Barcode::from_intervals(poset.clone(), [j]).unwrap());
        let (mi, _) = module_from_barcode(Field::default(), &bi).unwrap();
        let (mj, _) = module_from_barcode(Field::default(), &bj).unwrap();
        if poset.is_ordered() {
            let w1 = wasserstein_modules(Exponent::Finite(1), &mi, &mj, &mu).unwrap().distance;
            prop_assert!(w1.equals(&d));
        }
    }

    #[test]
    fn maps_out_of_an_interval_factor_through_a_nested_chain(n in 2usize..9, seed in any::<u64>()) {
        let poset = ordered_line(n);
        let mut g = rng(seed);
        let field = Field::default();
        let src_b = Barcode::from_intervals(poset.clone(), [random_interval(&mut g, n)]).unwrap();
        let tgt_b = random_barcode(&mut g, &poset, 5);
        let (s, sb) = module_from_barcode(field, &src_b).unwrap();
        let (t, tb) = module_from_barcode(field, &tgt_b).unwrap();
        let (s, t) = (Arc::new(s), Arc::new(t));
        let c = random_coefficients(&mut g, &poset, &sb, &tb, 0.8);
        let f = IntervalMorphism::from_coefficients(s, sb.clone(), t, tb.clone(), c).unwrap().reconstruct().unwrap();
        prop_assume!(!f.is_zero());
        let chain = structure_from_interval(&f, &sb, &tb).unwrap();
        let ivs = chain.chain_intervals(&tb);
        prop_assert!(!ivs.is_empty());
        for w in ivs.windows(2) {
            prop_assert!(w[1].lo > w[0].lo && w[1].hi < w[0].hi, "chain not strictly nested: {:?}", ivs);
        }
        let (ker, coker) = f.ker_coker_dims();
        prop_assert_eq!(chain.ker, ker);
        prop_assert_eq!(chain.coker, coker);
    }
}
