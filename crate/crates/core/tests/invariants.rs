use std::collections::BTreeSet;

use cobham_core::automata::{
    automaton_to_nd_substitution, automaton_to_substitution, normalize_for_conversion, substitution_to_automaton,
    Automaton, RecognizableSet,
};
use cobham_core::definability::{semilinear_members, SemilinearSet};
use cobham_core::factor::{preimage_partition, BlockMap, CodedFrequencies};
use cobham_core::format::{parse_spec, print_spec, Spec};
use cobham_core::nd::{count_pattern, ArrayWindow, NdSubstitution, Pattern};
use cobham_core::numeration::{greedy_rep, NumerationSystem};
use cobham_core::perron::{letter_frequencies, perron_data, word_frequencies};
use cobham_core::recurrence::{complexity, density_search, return_words};
use cobham_core::substitution::Substitution;
use cobham_core::words::{Alphabet, Letter, Morphism, Word};
use cobham_core::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn letters(n: usize) -> Vec<String> {
    ["a", "b", "c", "d"][..n].iter().map(|s| s.to_string()).collect()
}

/// A complete automaton over base `p` whose initial state loops on `0`.
fn padded_automaton() -> impl Strategy<Value = Automaton> {
    (2u64..=3, 1usize..=4).prop_flat_map(|(p, n)| {
        let table = proptest::collection::vec(proptest::collection::vec(0..n, p as usize), n);
        let terminals = proptest::collection::vec(any::<bool>(), n);
        (Just(p), Just(n), table, terminals).prop_map(|(p, n, mut table, terminals)| {
            table[0][0] = 0;
            let term: Vec<usize> = (0..n).filter(|&q| terminals[q]).collect();
            Automaton::new(letters(n), p, 1, table, 0, &term).expect("complete automaton")
        })
    })
}

/// A constant-length substitution with seed `a`, possibly invalid.
fn constant_length_substitution() -> impl Strategy<Value = Substitution> {
    (2usize..=3, 2usize..=3).prop_flat_map(|(k, p)| {
        proptest::collection::vec(proptest::collection::vec(0..k as u32, p), k).prop_filter_map(
            "seed must start its image",
            move |mut images| {
                images[0][0] = 0;
                let a = Alphabet::new(letters(k)).ok()?;
                let imgs = images.into_iter().map(|v| v.into_iter().map(Letter).collect()).collect();
                Substitution::new(Morphism::new(a.clone(), a, imgs).ok()?, Letter(0)).ok()
            },
        )
    })
}

fn primitive_substitution() -> impl Strategy<Value = Substitution> {
    constant_length_substitution().prop_filter("primitive", |s| {
        cobham_core::perron::is_primitive(&s.incidence_matrix()).unwrap_or(false)
    })
}

fn nd_substitution() -> impl Strategy<Value = NdSubstitution> {
    (2usize..=3).prop_flat_map(|k| {
        proptest::collection::vec(proptest::collection::vec(0..k as u32, 4), k).prop_filter_map(
            "valid rules",
            move |mut rules| {
                rules[0][0] = 0;
                let a = Alphabet::new(letters(k)).ok()?;
                let rules = rules.into_iter().map(|v| v.into_iter().map(Letter).collect()).collect();
                NdSubstitution::new(a, 2, 2, rules, Letter(0)).ok()
            },
        )
    })
}

fn binary_word(max: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0u32..2, 1..max).prop_map(|v| {
        Word::new(Alphabet::new(letters(2)).unwrap(), v.into_iter().map(Letter).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coded_fixed_point_matches_membership(a in padded_automaton()) {
        let set = RecognizableSet::new(a.clone()).unwrap();
        let norm = normalize_for_conversion(&a);
        let (s, c) = automaton_to_substitution(&norm).unwrap();
        let x = c.apply_letters(&s.fixed_point_letters(400).unwrap());
        let one = c.target().letter("1").unwrap();
        for (n, &l) in x.iter().enumerate() {
            prop_assert_eq!(l == one, set.member(n as u64), "n = {}", n);
        }
    }

    #[test]
    fn zero_padding_is_invariant(a in padded_automaton(), x in 0u64..500, k in 0usize..4) {
        let sys = NumerationSystem::base(a.base()).unwrap();
        let digits: Vec<usize> = greedy_rep(&sys, x).unwrap().digits.iter().map(|&d| d as usize).collect();
        let mut padded = vec![0; k];
        padded.extend(&digits);
        prop_assert_eq!(a.is_terminal(a.run(&digits)), a.is_terminal(a.run(&padded)));
    }

    #[test]
    fn substitution_automaton_round_trip(s in constant_length_substitution(), pick in any::<u8>()) {
        let outputs: Vec<Letter> = s.alphabet().letters().filter(|l| pick >> l.index() & 1 == 1).collect();
        let a = substitution_to_automaton(&s, &outputs).unwrap();
        let (back, coding) = automaton_to_substitution(&normalize_for_conversion(&a)).unwrap();
        let x = s.fixed_point_letters(300).unwrap();
        let y = coding.apply_letters(&back.fixed_point_letters(300).unwrap());
        let one = coding.target().letter("1").unwrap();
        for n in 0..300 {
            prop_assert_eq!(outputs.contains(&x[n]), y[n] == one, "n = {}", n);
        }
    }

    #[test]
    fn fixed_point_is_fixed(s in constant_length_substitution(), n in 1usize..200) {
        let x = s.fixed_point_prefix(n).unwrap();
        let image = s.morphism().apply(&x).unwrap();
        prop_assert!(x.is_prefix_of(&image));
    }

    #[test]
    fn perron_vectors_are_exact(s in primitive_substitution()) {
        let m = s.incidence_matrix();
        let e = perron_data(&m).unwrap();
        let theta = e.theta_exact.clone().expect("constant length is exact");
        prop_assert_eq!(theta, BigRational::from_integer((s.constant_length().unwrap() as i64).into()));
        let r = e.right_exact.clone().unwrap();
        let sum: BigRational = r.iter().fold(BigRational::zero(), |a, b| a + b);
        prop_assert!(sum.is_one());
        for i in 0..m.rows() {
            let mr: BigRational = (0..m.cols()).fold(BigRational::zero(), |acc, j| {
                acc + BigRational::from_integer((m.get(i, j) as i64).into()) * &r[j]
            });
            prop_assert_eq!(mr, e.theta_exact.clone().unwrap() * &r[i]);
            prop_assert!(r[i] > BigRational::zero());
        }
    }

    #[test]
    fn frequencies_transfer_to_block_letters(s in primitive_substitution(), k in 1usize..=4) {
        let direct = word_frequencies(&s, k).unwrap();
        let total: BigRational = direct.entries.values().fold(BigRational::zero(), |a, f| a + f.exact.clone().unwrap());
        prop_assert!(total.is_one());
        let kb = s.k_block(k).unwrap();
        let via = letter_frequencies(kb.substitution()).unwrap();
        for (block, f) in &via.entries {
            let u = kb.factor(block.letters()[0]);
            prop_assert_eq!(&direct.get(&u).unwrap().exact, &f.exact);
        }
    }

    #[test]
    fn complexity_grows_slowly(s in primitive_substitution()) {
        let x = s.fixed_point_prefix(4096).unwrap();
        let k = s.alphabet().len();
        let mut prev = complexity(&x, 1);
        for n in 2..=16 {
            let p = complexity(&x, n);
            prop_assert!(prev <= p && p <= prev * k, "n = {}", n);
            prev = p;
        }
    }

    #[test]
    fn return_words_partition_the_prefix(w in binary_word(80), u in binary_word(4)) {
        let Ok(r) = return_words(&w, &u) else { return Ok(()) };
        let first = r.positions[0];
        let last = *r.positions.last().unwrap();
        let mut glued = Vec::new();
        let mut longest = 0;
        for pair in r.positions.windows(2) {
            let piece = &w.letters()[pair[0]..pair[1]];
            longest = longest.max(piece.len());
            let rw = Word::new(w.alphabet().clone(), piece.to_vec()).unwrap();
            prop_assert!(r.return_words.contains(&rw));
            glued.extend_from_slice(piece);
        }
        prop_assert_eq!(&glued[..], &w.letters()[first..last]);
        prop_assert_eq!(longest, r.max_gap);
    }

    #[test]
    fn nd_fixed_arrays_nest(s in nd_substitution(), n in 1usize..=4) {
        let big = s.fixed_array(n + 1).unwrap();
        let small = s.fixed_array(n).unwrap();
        let side = small.shape().to_vec();
        let head = big.sub_window(&[0, 0], &side).unwrap();
        prop_assert_eq!(head.cells(), small.cells());
    }

    #[test]
    fn nd_incidence_counts(s in nd_substitution(), n in 1u32..=3) {
        let m = s.incidence_matrix();
        prop_assert!(m.column_sums().iter().all(|&c| c == s.theta()));
        let mn = m.pow(n).unwrap();
        let pn = s.power(n as usize).unwrap();
        prop_assert_eq!(pn.incidence_matrix(), mn.clone());
        for a in s.alphabet().letters() {
            let one = ArrayWindow::single(s.alphabet().clone(), 2, a).unwrap();
            let img = s.iterate(&one, n as usize).unwrap();
            for b in s.alphabet().letters() {
                let count = img.cells().iter().filter(|&&c| c == b).count() as u64;
                prop_assert_eq!(count, mn.get(b.index(), a.index()));
            }
        }
    }

    #[test]
    fn pattern_counts_are_translation_invariant(s in nd_substitution(), dx in 0usize..3, dy in 0usize..3) {
        let w = s.fixed_array(4).unwrap();
        let a = s.alphabet().clone();
        let p = Pattern::new(a.clone(), vec![vec![0, 0], vec![1, 0]], vec![Letter(0), Letter(0)]).unwrap();
        let cells: Vec<Letter> = w.cells().to_vec();
        let shifted = ArrayWindow::new(a, w.shape().to_vec(), cells).unwrap().with_origin(vec![dx, dy]).unwrap();
        prop_assert_eq!(count_pattern(&w, &p).unwrap(), count_pattern(&shifted, &p).unwrap());
    }

    #[test]
    fn block_maps_commute_with_shift(s in constant_length_substitution(), table in proptest::collection::vec(0u32..2, 64), shift in 0usize..20) {
        let k = s.alphabet().len() as u32;
        let target = Alphabet::new(["0", "1"]).unwrap();
        let f = BlockMap::from_fn(s.alphabet().clone(), target, 1, |w| {
            Letter(table[(w[0].0 * k * k + w[1].0 * k + w[2].0) as usize % 64])
        })
        .unwrap();
        let x = s.fixed_point_letters(80).unwrap();
        let fx = f.apply_letters(&x).unwrap();
        let fshift = f.apply_letters(&x[shift..]).unwrap();
        prop_assert_eq!(&fx[shift..], &fshift[..]);
    }

    #[test]
    fn coded_frequencies_are_conserved(s in primitive_substitution(), table in proptest::collection::vec(0u32..2, 64), n in 1usize..=4) {
        let k = s.alphabet().len() as u32;
        let target = Alphabet::new(["0", "1"]).unwrap();
        let f = BlockMap::from_fn(s.alphabet().clone(), target, 1, |w| {
            Letter(table[(w[0].0 * k * k + w[1].0 * k + w[2].0) as usize % 64])
        })
        .unwrap();
        let coded = CodedFrequencies::new(&s, &f, n).unwrap();
        let total: BigRational = coded.table(n).unwrap().values().fold(BigRational::zero(), |a, (fr, _)| a + fr.exact.clone().unwrap());
        prop_assert!(total.is_one());
        let language = s.factor_set(n + 2).unwrap();
        let parts = preimage_partition(&f, &language).unwrap();
        let mut seen = BTreeSet::new();
        for (u, vs) in &parts {
            for v in vs {
                prop_assert!(seen.insert(v.clone()), "{:?} has two images", v);
                prop_assert_eq!(&f.apply_letters(v).unwrap(), u);
            }
        }
        let expected: BTreeSet<Vec<Letter>> = language.iter().filter(|v| v.len() == n + 2).cloned().collect();
        let covered: BTreeSet<Vec<Letter>> = seen.into_iter().filter(|v| v.len() == n + 2).collect();
        prop_assert_eq!(covered, expected);
    }

    #[test]
    fn substitution_specs_round_trip(s in constant_length_substitution()) {
        let spec = Spec::Substitution { substitution: s, coding: None };
        let text = print_spec(&spec);
        let parsed = parse_spec(&text).unwrap();
        prop_assert_eq!(&parsed, &spec);
        prop_assert_eq!(print_spec(&parsed), text);
    }

    #[test]
    fn automaton_specs_round_trip(a in padded_automaton()) {
        let spec = Spec::Automaton(a);
        let text = print_spec(&spec);
        prop_assert_eq!(parse_spec(&text).unwrap(), spec);
    }

    #[test]
    fn nd_specs_round_trip(s in nd_substitution()) {
        let spec = Spec::NdSubstitution { substitution: s, coding: None };
        prop_assert_eq!(parse_spec(&print_spec(&spec)).unwrap(), spec);
    }

    #[test]
    fn semilinear_members_are_monotone(
        base in proptest::collection::vec(proptest::collection::vec(0u64..6, 2), 0..3),
        gens in proptest::collection::vec(proptest::collection::vec(0u64..4, 2), 1..3),
        n in 1usize..10,
    ) {
        let sl = SemilinearSet::new(2, base, vec![gens]).unwrap();
        let small = semilinear_members(&sl, n).unwrap();
        let big = semilinear_members(&sl, n + 1).unwrap();
        prop_assert!(small.is_subset(&big));
        for v in &big {
            let x: Vec<u64> = v.iter().map(|&c| c as u64).collect();
            prop_assert!(sl.contains(&x).unwrap());
        }
    }

    #[test]
    fn density_witness_is_least(t in 0.5f64..2.0, eps in 0.02f64..0.2) {
        let Ok((n, m)) = density_search(2.0, 3.0, t, eps, 40) else { return Ok(()) };
        let ok = |n: i32, m: i32| (2f64.powi(n) / 3f64.powi(m) - t).abs() < eps;
        prop_assert!(ok(n as i32, m as i32));
        for total in 2..(n + m) as i32 {
            for a in 1..total {
                prop_assert!(!ok(a, total - a), "({}, {}) beats ({}, {})", a, total - a, n, m);
            }
        }
    }

    #[test]
    fn nd_conversion_matches_membership(table in proptest::collection::vec(proptest::collection::vec(0usize..2, 4), 2), term in any::<bool>()) {
        let mut table = table;
        table[0][0] = 0;
        let terminals: Vec<usize> = if term { vec![0] } else { vec![1] };
        let a = Automaton::new(letters(2), 2, 2, table, 0, &terminals).unwrap();
        let (s, c) = automaton_to_nd_substitution(&normalize_for_conversion(&a)).unwrap();
        let w = s.fixed_array(3).unwrap();
        let one = c.target().letter("1").unwrap();
        for i in 0..8u64 {
            for j in 0..8u64 {
                let cell = w.get(&[i as usize, j as usize]).unwrap();
                prop_assert_eq!(c.map(cell) == one, a.is_terminal(a.run_vector(&[i, j]).unwrap()));
            }
        }
    }
}
