use std::collections::{BTreeSet, HashMap};

use plasticoding_core::clause::EnvironmentState;
use plasticoding_core::development::{develop, early_develop, DevelopmentConfig};
use plasticoding_core::evolution::{binary_tournament, consolidate, Individual};
use plasticoding_core::phenotype::{
    descriptor_recurrence, descriptor_sensors, descriptor_sensors_reach, oscillator_output, ModuleKind, Phenotype,
};
use plasticoding_core::regulation::regulate;
use plasticoding_core::sim::{Descriptors, EvaluationRecord, SeasonRecord};
use plasticoding_core::symbol::SymbolKind;
use plasticoding_core::text::{parse_genotype, serialize_genotype};
use plasticoding_core::variation::{crossover, crossover_traced, init_genotype, mutate, mutate_traced, ClauseEdit, Mutation};
use plasticoding_core::{Encoding, Genotype, RandomStream, VariationConfig};
use proptest::prelude::*;

fn encoding() -> impl Strategy<Value = Encoding> {
    prop_oneof![Just(Encoding::Baseline), Just(Encoding::Plasticoding)]
}

/// A genotype after a random number of crossover and mutation rounds.
fn evolved(encoding: Encoding, seed: u64, rounds: usize) -> Genotype {
    let cfg = VariationConfig::default();
    let mut rng = RandomStream::new(seed);
    let mut g = init_genotype(encoding, &cfg, &mut rng);
    for _ in 0..rounds {
        let other = init_genotype(encoding, &cfg, &mut rng);
        g = crossover(&g, &other, &cfg, &mut rng).unwrap();
        g = mutate(&g, &cfg, &mut rng);
    }
    g
}

fn check_phenotype(p: &Phenotype, max_modules: usize) -> Result<(), String> {
    let m = &p.morphology;
    let n = &p.controller;
    let cores = m.modules().iter().filter(|x| x.kind == ModuleKind::Core).count();
    if cores != 1 {
        return Err(format!("{cores} cores"));
    }
    if !(1..=max_modules).contains(&m.size()) {
        return Err(format!("size {}", m.size()));
    }
    let cells: BTreeSet<_> = m.modules().iter().map(|x| x.cell).collect();
    if cells.len() != m.size() {
        return Err("grid collision".into());
    }
    for x in m.modules() {
        if let Some((parent, _)) = x.parent {
            if x.kind == ModuleKind::Sensor && m.module(parent).kind.is_joint() {
                return Err("sensor on joint".into());
            }
        }
    }
    let joints = m.modules().iter().filter(|x| x.kind.is_joint()).count();
    if n.neurons().len() != joints {
        return Err("oscillator count".into());
    }
    let mut per_joint: HashMap<usize, usize> = HashMap::new();
    for neuron in n.neurons() {
        if !m.module(neuron.module).kind.is_joint() {
            return Err("neuron on a non-joint".into());
        }
        *per_joint.entry(neuron.module.0).or_default() += 1;
    }
    if per_joint.values().any(|&c| c != 1) {
        return Err("joint with several oscillators".into());
    }
    if n.inputs().len() != m.count(ModuleKind::Sensor) {
        return Err("input count".into());
    }
    for (k, neuron) in n.neurons().iter().enumerate() {
        let serials: Vec<usize> = neuron.edges().iter().map(|e| n.edge(*e).neuron_serial).collect();
        if serials != (1..=serials.len()).collect::<Vec<_>>() {
            return Err(format!("neuron {k} serials {serials:?}"));
        }
    }
    for (k, input) in n.inputs().iter().enumerate() {
        let serials: Vec<usize> = input.edges().iter().map(|e| n.edge(*e).input_serial).collect();
        if serials != (1..=serials.len()).collect::<Vec<_>>() {
            return Err(format!("input {k} serials {serials:?}"));
        }
    }
    Ok(())
}

#[test]
fn fresh_genotypes_round_trip_bit_exactly() {
    let cfg = VariationConfig::default();
    for encoding in [Encoding::Baseline, Encoding::Plasticoding] {
        let mut rng = RandomStream::new(17);
        for _ in 0..10_000 {
            let g = init_genotype(encoding, &cfg, &mut rng);
            g.validate().unwrap();
            let text = serialize_genotype(&g);
            let back = parse_genotype(&text).unwrap();
            assert_eq!(back, g);
            assert_eq!(serialize_genotype(&back), text);
        }
    }
}

#[test]
fn init_lengths_cover_every_group_count() {
    let cfg = VariationConfig::default();
    let mut rng = RandomStream::new(5);
    let mut core_lengths = BTreeSet::new();
    let mut other_lengths = BTreeSet::new();
    for _ in 0..2_000 {
        let g = init_genotype(Encoding::Plasticoding, &cfg, &mut rng);
        for (i, group) in g.rules().iter().enumerate() {
            for t in group {
                if i == 0 {
                    core_lengths.insert(t.body.len());
                } else {
                    other_lengths.insert(t.body.len());
                }
            }
        }
    }
    assert_eq!(core_lengths, BTreeSet::from([6, 11, 16, 21]));
    assert_eq!(other_lengths, BTreeSet::from([5, 10, 15, 20]));
}

fn within_3_sigma(count: usize, trials: usize, p: f64) -> bool {
    let mean = trials as f64 * p;
    let sd = (trials as f64 * p * (1.0 - p)).sqrt();
    (count as f64 - mean).abs() <= 3.0 * sd
}

#[test]
fn mutation_operator_frequencies() {
    let cfg = VariationConfig::default();
    let trials = 50_000;
    for (encoding, ops) in [(Encoding::Baseline, 3.0), (Encoding::Plasticoding, 4.0)] {
        let g = init_genotype(encoding, &cfg, &mut RandomStream::new(2));
        let mut rng = RandomStream::new(3);
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for _ in 0..trials {
            let key = match mutate_traced(&g, &cfg, &mut rng).1 {
                None => "none",
                Some(Mutation::AddSymbol) => "add",
                Some(Mutation::DeleteSymbol) => "delete",
                Some(Mutation::SwapSymbols) => "swap",
                Some(Mutation::Clause(_)) => "clause",
            };
            *counts.entry(key).or_default() += 1;
        }
        let get = |k| counts.get(k).copied().unwrap_or(0);
        assert!(within_3_sigma(get("none"), trials, 0.2), "{encoding}: {counts:?}");
        for k in ["add", "delete", "swap"] {
            assert!(within_3_sigma(get(k), trials, 0.8 / ops), "{encoding} {k}: {counts:?}");
        }
        if encoding == Encoding::Plasticoding {
            assert!(within_3_sigma(get("clause"), trials, 0.2), "{counts:?}");
        } else {
            assert_eq!(get("clause"), 0);
        }
    }
}

#[test]
fn clause_edits_are_uniform_over_feasible_ones() {
    let cfg = VariationConfig {
        mutation_probability: 1.0,
        ..Default::default()
    };
    let g = init_genotype(Encoding::Plasticoding, &cfg, &mut RandomStream::new(8));
    let mut rng = RandomStream::new(9);
    let mut single = [0usize; 2];
    let mut double = [0usize; 3];
    let (mut n_single, mut n_double) = (0, 0);
    for _ in 0..200_000 {
        let mut probe = rng.clone();
        let refs: Vec<(usize, usize)> = (0..5).flat_map(|i| (0..2).map(move |t| (i, t))).collect();
        let chosen = *probe.pick(&refs);
        let terms = g.rules()[chosen.0][chosen.1].clause.term_count();
        if let (_, Some(Mutation::Clause(e))) = mutate_traced(&g, &cfg, &mut rng) {
            if terms == 1 {
                n_single += 1;
                single[match e {
                    ClauseEdit::AddTerm => 0,
                    ClauseEdit::FlipTerm => 1,
                    other => panic!("{other:?} on a single-term clause"),
                }] += 1;
            } else {
                n_double += 1;
                double[match e {
                    ClauseEdit::RemoveTerm => 0,
                    ClauseEdit::FlipTerm => 1,
                    ClauseEdit::FlipOperator => 2,
                    ClauseEdit::AddTerm => panic!("add beyond the term limit"),
                }] += 1;
            }
        }
    }
    for c in single {
        assert!(within_3_sigma(c, n_single, 0.5), "{single:?}");
    }
    for c in double {
        assert!(within_3_sigma(c, n_double, 1.0 / 3.0), "{double:?}");
    }
}

#[test]
fn crossover_takes_each_group_from_either_parent_evenly() {
    let cfg = VariationConfig::default();
    let mut rng = RandomStream::new(21);
    let a = init_genotype(Encoding::Plasticoding, &cfg, &mut rng);
    let b = init_genotype(Encoding::Plasticoding, &cfg, &mut rng);
    let trials = 10_000;
    let mut from_second = [0usize; 5];
    let mut applied = 0;
    for _ in 0..trials {
        let (child, origin) = crossover_traced(&a, &b, &cfg, &mut rng).unwrap();
        if child != a || origin.contains(&1) {
            applied += 1;
        }
        for (i, o) in origin.iter().enumerate() {
            from_second[i] += usize::from(*o);
            let expected = if *o == 0 { &a.rules()[i] } else { &b.rules()[i] };
            assert_eq!(&child.rules()[i], expected);
        }
    }
    for c in from_second {
        let share = c as f64 / (trials as f64 * 0.8);
        assert!((share - 0.5).abs() < 0.02, "{from_second:?}");
    }
    assert!(within_3_sigma(applied, trials, 0.8 * (1.0 - 1.0 / 32.0)));
}

fn record(flat: f64, tilted: f64) -> EvaluationRecord {
    let season = |f: f64| SeasonRecord {
        phenotype: Phenotype {
            morphology: plasticoding_core::Morphology::with_core(),
            controller: plasticoding_core::ControllerNetwork::new(),
        },
        descriptors: Descriptors {
            size: 1,
            sensors: 0.0,
            sensors_reach: 0.0,
            recurrence: 0.0,
            speed: 0.0,
            balance: 1.0,
        },
        fitness: f,
    };
    EvaluationRecord {
        flat: season(flat),
        tilted: season(tilted),
    }
}

#[test]
fn tournament_ties_split_evenly() {
    let g = init_genotype(Encoding::Baseline, &VariationConfig::default(), &mut RandomStream::new(1));
    let pool: Vec<Individual> = (0..2).map(|i| Individual::new(i, g.clone(), record(1.0, 1.0))).collect();
    let mut rng = RandomStream::new(4);
    let trials = 10_000;
    let first = (0..trials).filter(|_| binary_tournament(&pool, &mut rng) == 0).count();
    assert!((first as f64 / trials as f64 - 0.5).abs() < 0.02);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn variation_closure_and_determinism(enc in encoding(), seed in any::<u64>(), rounds in 0usize..12) {
        let g = evolved(enc, seed, rounds);
        prop_assert!(g.validate().is_ok());
        prop_assert_eq!(parse_genotype(&serialize_genotype(&g)).unwrap(), g.clone());
        prop_assert_eq!(serialize_genotype(&evolved(enc, seed, rounds)), serialize_genotype(&g));
    }

    #[test]
    fn development_invariants(enc in encoding(), seed in any::<u64>(), rounds in 0usize..6) {
        let g = evolved(enc, seed, rounds);
        let cfg = DevelopmentConfig::default();
        let flat = develop(&g, &EnvironmentState::flat(), &cfg).unwrap();
        let tilted = develop(&g, &EnvironmentState::tilted(), &cfg).unwrap();
        for d in [&flat, &tilted] {
            prop_assert_eq!(d.early.core_count(), 1);
            prop_assert_eq!(d.early.symbols[0].kind, SymbolKind::Core);
            if let Err(e) = check_phenotype(&d.phenotype, cfg.max_modules) {
                prop_assert!(false, "{}", e);
            }
            let n = &d.phenotype.controller;
            prop_assert!(n.neurons().iter().filter_map(|x| x.recurrent).all(|w| (-1.0..=1.0).contains(&w)));
            for v in [
                descriptor_sensors(&d.phenotype.morphology),
                descriptor_sensors_reach(n),
                descriptor_recurrence(n),
            ] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }
        prop_assert_eq!(&develop(&g, &EnvironmentState::flat(), &cfg).unwrap().phenotype, &flat.phenotype);
        if enc == Encoding::Baseline {
            prop_assert_eq!(&flat.phenotype, &tilted.phenotype);
        }
    }

    #[test]
    fn regulated_bodies_are_bounded(seed in any::<u64>(), rounds in 0usize..6) {
        let g = evolved(Encoding::Plasticoding, seed, rounds);
        for env in [EnvironmentState::flat(), EnvironmentState::tilted()] {
            let rules = regulate(&g, &env).unwrap();
            prop_assert_eq!(&rules, &regulate(&g, &env).unwrap());
            let mut longest = 1;
            for (i, s) in SymbolKind::REPLACEABLE.iter().enumerate() {
                let total: usize = g.rules()[i].iter().map(|t| t.body.len()).sum();
                prop_assert!(rules.body(*s).len() <= total);
                longest = longest.max(rules.body(*s).len());
            }
            for k in 0..4u32 {
                let ep = early_develop(&rules, k as usize);
                prop_assert!(ep.symbols.len() <= longest.pow(k));
            }
        }
    }

    #[test]
    fn oscillator_range_and_period(a in 0.0f64..10.0, p in 0.01f64..10.0, o in 0.0f64..10.0, t in -100.0f64..100.0) {
        let v = oscillator_output(a, p, o, t);
        prop_assert!(v >= 0.5 - a / 2.0 - 1e-9 && v <= 0.5 + a / 2.0 + 1e-9);
        prop_assert!((oscillator_output(a, p, o, t + p) - v).abs() < 1e-9);
    }

    #[test]
    fn consolidation_matches_pairwise_oracle(
        objectives in prop::collection::vec(
            (prop_oneof![(-2i32..3).prop_map(f64::from), -2.0f64..3.0], prop_oneof![(-2i32..3).prop_map(f64::from), -2.0f64..3.0]),
            1..50,
        )
    ) {
        let g = init_genotype(Encoding::Baseline, &VariationConfig::default(), &mut RandomStream::new(0));
        let mut pool: Vec<Individual> = objectives
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| Individual::new(i as u64, g.clone(), record(a, b)))
            .collect();
        consolidate(&mut pool);
        for (i, &(a1, b1)) in objectives.iter().enumerate() {
            let mut count = 0;
            for &(a2, b2) in &objectives {
                let not_worse = a1 >= a2 && b1 >= b2;
                let better = a1 > a2 || b1 > b2;
                if not_worse && better {
                    count += 1;
                }
            }
            prop_assert_eq!(pool[i].consolidated, count);
            prop_assert!(count < objectives.len());
        }
    }
}
