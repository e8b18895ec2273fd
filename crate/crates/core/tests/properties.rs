use std::sync::Arc;

use gcat::catalog::{random_dwyer_map, random_free_category, random_functor, random_gposet, random_mono_chain, random_poset, rng};
use gcat::colimits::{pushout_along_dwyer, sequential_colimit};
use gcat::fincat::{FinCat, FinFunctor};
use gcat::gaction::{fixed_category, lambda, phi, GCategory};
use gcat::group::{subgroups, FinGroup};
use gcat::io::{decode_category, decode_functor, decode_gaction, encode_category, encode_functor, encode_gaction};
use gcat::verify::pushout_explicit_case;
use proptest::prelude::*;

fn small_category(seed: u64) -> FinCat {
    let mut r = rng(seed);
    if seed.is_multiple_of(2) {
        random_poset(&mut r, 5, 0.4)
    } else {
        random_free_category(&mut r, 4, 0.5)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn explicit_pushout_matches_presented(seed in any::<u64>()) {
        let r = pushout_explicit_case(seed);
        prop_assert!(r.pass, "{} {:?}", r.witness, r.error);
    }

    #[test]
    fn pushout_mediates_its_own_legs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let i = random_dwyer_map(&mut r, 5);
        let c = Arc::new(random_poset(&mut r, 4, 0.5));
        let Some(f) = random_functor(&mut r, i.source(), &c) else { return Ok(()) };
        let p = pushout_along_dwyer(&i, &f, None).unwrap();
        prop_assert_eq!(p.from_c.after(&f).unwrap(), p.from_b.after(&i).unwrap());
        let m = p.mediate(&p.from_c, &p.from_b).unwrap();
        prop_assert_eq!(m, FinFunctor::identity(p.category.clone()));
        let point = Arc::new(FinCat::terminal());
        let to_point = |x: &Arc<FinCat>| FinFunctor::constant(x.clone(), point.clone(), 0);
        let m = p.mediate(&to_point(f.target()), &to_point(i.target())).unwrap();
        prop_assert_eq!(m, to_point(&p.category));
    }

    #[test]
    fn sequential_colimit_is_a_cocone(seed in any::<u64>(), len in 1usize..4) {
        let mut r = rng(seed);
        let g = Arc::new(FinGroup::cyclic(2));
        let (stages, maps) = random_mono_chain(&mut r, &g, len);
        let s = sequential_colimit(stages[0].base(), &maps).unwrap();
        for (k, f) in maps.iter().enumerate() {
            prop_assert_eq!(s.legs[k + 1].after(f).unwrap(), s.legs[k].clone());
        }
        let last = stages.last().unwrap().base();
        prop_assert_eq!(s.category.num_objects(), last.num_objects());
        prop_assert_eq!(s.category.num_morphisms(), last.num_morphisms());
        let back = s.legs.last().unwrap().inverse().unwrap();
        let cocone: Vec<FinFunctor> = s.legs.iter().map(|l| back.after(l).unwrap()).collect();
        prop_assert_eq!(s.mediate(&cocone).unwrap(), back);
    }

    #[test]
    fn functor_composition_laws(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = Arc::new(small_category(seed));
        let b = Arc::new(small_category(seed.wrapping_add(1)));
        let c = Arc::new(small_category(seed.wrapping_add(2)));
        let (Some(f), Some(g)) = (random_functor(&mut r, &a, &b), random_functor(&mut r, &b, &c)) else { return Ok(()) };
        prop_assert_eq!(FinFunctor::identity(b.clone()).after(&f).unwrap(), f.clone());
        prop_assert_eq!(f.after(&FinFunctor::identity(a.clone())).unwrap(), f.clone());
        let h = FinFunctor::identity(c.clone());
        prop_assert_eq!(h.after(&g).unwrap().after(&f).unwrap(), h.after(&g.after(&f).unwrap()).unwrap());
        let gf = g.after(&f).unwrap();
        for (y, x) in a.composable_pairs() {
            let xy = a.compose(y, x).unwrap();
            prop_assert_eq!(gf.on_morphism(xy), c.compose(gf.on_morphism(y), gf.on_morphism(x)).unwrap());
        }
    }

    #[test]
    fn manifests_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = Arc::new(small_category(seed));
        let c = Arc::new(small_category(!seed));
        prop_assert_eq!(decode_category(&encode_category(&a)).unwrap(), (*a).clone());
        if let Some(f) = random_functor(&mut r, &a, &c) {
            prop_assert_eq!(decode_functor(&encode_functor(&f)).unwrap(), f);
        }
        let x = random_gposet(&mut r, &Arc::new(FinGroup::symmetric3()));
        let y = decode_gaction(&encode_gaction(&x)).unwrap();
        prop_assert_eq!(y.base(), x.base());
        for g in 0..6 {
            prop_assert_eq!(y.sigma(g), x.sigma(g));
        }
    }

    #[test]
    fn fixed_points_shrink_along_subgroups(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = Arc::new(FinGroup::symmetric3());
        let x = random_gposet(&mut r, &g);
        let subs = subgroups(&g);
        for k in &subs {
            for h in &subs {
                if k.is_subset_of(h) {
                    prop_assert!(fixed_category(&x, h).num_objects() <= fixed_category(&x, k).num_objects());
                }
            }
        }
        prop_assert_eq!(&fixed_category(&x, &g.trivial_subgroup()), &**x.base());
        let back = lambda(&phi(&x));
        prop_assert_eq!(back.base(), x.base());
    }

    #[test]
    fn trivial_action_fixes_everything(seed in any::<u64>()) {
        let c = Arc::new(small_category(seed));
        let g = Arc::new(FinGroup::cyclic(3));
        let x = GCategory::trivial(g.clone(), c.clone());
        for h in subgroups(&g) {
            prop_assert_eq!(&fixed_category(&x, &h), &*c);
        }
    }
}
