//! Demo and verification suites. Each returns a [`Report`] whose entries
//! are deterministic for a fixed [`RunConfig`].

use std::collections::HashMap;
use std::f64::consts::PI;

use itertools::Itertools;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use spectacles::decks::{Deck, DeckKind};
use spectacles::hamiltonian::{
    compose_hamiltonians, flow_jacobian_determinant, integrate, reverse_hamiltonian,
    steering_hamiltonian, Catalog, DrivingHamiltonian, PhasePoint,
};
use spectacles::quantum::{
    bell_alternate_decomposition, bell_states, entangled_cut, heisenberg_deviation,
    measurement_chain, oscillator_hamiltonian, oscillator_observables, product_similarity,
    qubit_chain_hamiltonian, verify_picture_equivalence, Decomposition, Observable, StateVector,
    Unitary, UnitarySchedule, UnitarySchema, DEFAULT_PROBES,
};
use spectacles::schema::{
    candidate_similarity_group, check_property_s, check_property_s_ext, generate_group,
    maximal_similarity_group, run_instance, Instance, Schema, StateMap, TheorySchema,
    DEFAULT_MAX_GROUP_STATES,
};
use spectacles::shift::{Exclusion, ShiftSpace};
use spectacles::similarity::{
    check_invariance, construct_gruebleen, every_state, random_instances, state_equals,
    transform_instance, Classification, Conclusion, ExtendedSimilarity, GroupChoice, InstanceSet,
    TheoremConfig,
};

use crate::report::{to_value, Entry, Report, RunConfig};
use crate::CliError;

type SuiteResult = Result<(Vec<Entry>, Value), CliError>;

/// Picture-equivalence step size.
const DT: f64 = 0.05;
const PAIRS: usize = 50;
const HEISENBERG_TRIALS: usize = 50;
const SHIFT_SAMPLES: usize = 500;
const THEOREM_MAX_SIZE: usize = 7;

fn rng(cfg: &RunConfig, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(cfg.seed);
    r.set_stream(stream);
    r
}

fn report(command: &str, cfg: &RunConfig, suite: SuiteResult) -> Result<Report, CliError> {
    let (entries, details) = suite?;
    Ok(Report::new(command, cfg.clone(), entries).with_details(details))
}

pub fn demo_decks(cfg: &RunConfig) -> Result<Report, CliError> {
    report("demo decks", cfg, decks(cfg))
}

fn decks(cfg: &RunConfig) -> SuiteResult {
    let n = cfg.size.unwrap_or(4);
    let mut entries = Vec::new();
    let full = Deck::build(n, DeckKind::Full)?;
    let fs = full.schema();
    let group: Vec<_> = fs
        .actions()
        .map(|v| ExtendedSimilarity::constant(v.clone(), fs.n_steps()))
        .collect();
    let eq = check_invariance(fs, &state_equals(fs, 0)?, &group, &every_state(fs))?;
    entries.push(
        Entry::equals(
            "full_deck.state_equals.classification",
            eq.classification,
            Classification::NotInvariant,
        )
        .with_witness(&eq.witness),
    );

    if n % 2 == 1 {
        entries.push(Entry::skipped(
            "half_deck",
            format!("{n} cards cannot be split into equal halves"),
        ));
        return Ok((entries, json!({ "cards": n, "full_deck_states": fs.len() })));
    }

    let half = Deck::build(n, DeckKind::Half)?;
    let hs = half.schema();
    let x = half.half_swap()?;
    let s = check_property_s(hs, &x)?;
    entries.push(Entry::equals("half_swap.property_s", s.holds, true));
    let ext = check_property_s_ext(hs, &[StateMap::identity(hs.len()), x])?;
    let mut e = Entry::equals("half_swap.property_s_ext(1,X)", ext.holds, false);
    if let Some(w) = &ext.witness {
        e = e.with_witness(&json!({ "violation": w, "text": w.to_string() }));
    } else {
        e.status = crate::report::Status::Fail;
        e.reason = Some("no witness produced".into());
    }
    entries.push(e);

    let coset = half.half_swap_coset_candidates()?;
    entries.push(Entry::equals(
        "half_swap_coset.order",
        coset.len(),
        2 * hs.maps().len(),
    ));
    let group: Vec<_> = coset
        .iter()
        .map(|v| ExtendedSimilarity::constant(v.clone(), hs.n_steps()))
        .collect();
    let inv = check_invariance(
        hs,
        &half.marked_same_half(&[0, 1])?,
        &group,
        &every_state(hs),
    )?;
    entries.push(Entry::equals(
        "marked_same_half.classification",
        inv.classification,
        Classification::InvariantNontrivial,
    ));
    Ok((
        entries,
        json!({
            "cards": n,
            "full_deck_states": fs.len(),
            "half_deck_states": hs.len(),
            "half_deck_kinematic_maps": hs.maps().len(),
            "marked_same_half": inv,
        }),
    ))
}

pub fn demo_shift(cfg: &RunConfig) -> Result<Report, CliError> {
    report("demo shift", cfg, shift(cfg))
}

fn shift(cfg: &RunConfig) -> SuiteResult {
    let p = cfg.size.unwrap_or(3);
    let space = ShiftSpace::new(p)?;
    let schema = space.schema();
    let mut entries = Vec::new();
    let generators = space.structural_generators();
    for (name, g) in ["sigma", "beta", "rho"].iter().zip(&generators) {
        let v = check_property_s(schema, g)?;
        entries.push(Entry::equals(format!("{name}.property_s"), v.holds, true));
    }

    let n = space.len();
    let last = n - 1;
    let (candidates, exhaustive): (Vec<StateMap>, bool) = if n <= 8 {
        (
            (0..n).permutations(n).map(StateMap::from_images).collect(),
            true,
        )
    } else {
        let mut r = rng(cfg, 1);
        (
            (0..SHIFT_SAMPLES)
                .map(|_| {
                    let mut v: Vec<usize> = (0..n).collect();
                    v.shuffle(&mut r);
                    StateMap::from_images(v)
                })
                .collect(),
            false,
        )
    };
    let mut tested = 0usize;
    let mut consistent = 0usize;
    let mut first_witness = None;
    let mut first_failure = None;
    for v in &candidates {
        let breaks = [0, last]
            .iter()
            .any(|&b| v.image(b) != 0 && v.image(b) != last);
        if !breaks {
            continue;
        }
        tested += 1;
        let excluded = space.certify_exclusion(v)?;
        let fails_s = !check_property_s(schema, v)?.holds;
        match (&excluded, fails_s) {
            (Exclusion::Excluded(w), true) => {
                consistent += 1;
                first_witness.get_or_insert_with(|| w.clone());
            }
            _ => {
                first_failure.get_or_insert_with(|| v.images().to_vec());
            }
        }
    }
    let mut e = Entry::equals("exclusion_consistency", consistent, tested);
    if let Some(w) = &first_witness {
        e = e.with_witness(w);
    }
    if let Some(f) = first_failure {
        e.reason = Some(format!("bijection {f:?} not excluded consistently"));
    }
    entries.push(e);

    let group: Vec<_> = generate_group(&generators, n)
        .into_iter()
        .map(|v| ExtendedSimilarity::constant(v, schema.n_steps()))
        .collect();
    let inv = check_invariance(
        schema,
        &space.is_constant_proposition(),
        &group,
        &every_state(schema),
    )?;
    entries.push(Entry::equals(
        "is_constant.classification",
        inv.classification,
        Classification::InvariantNontrivial,
    ));
    Ok((
        entries,
        json!({
            "period": p,
            "states": n,
            "bijections": if exhaustive { "enumerated" } else { "sampled" },
            "tested": tested,
            "structural_group_order": group.len(),
        }),
    ))
}

pub fn demo_quantum_pictures(cfg: &RunConfig) -> Result<Report, CliError> {
    report("demo quantum-pictures", cfg, quantum_pictures(cfg))
}

fn quantum_pictures(cfg: &RunConfig) -> SuiteResult {
    if cfg.grid_points < 2 {
        return Err(CliError::Usage("grid needs at least 2 points".into()));
    }
    let steps = cfg.grid_points - 1;
    let mut r = rng(cfg, 2);
    let mut entries = Vec::new();

    let u = UnitarySchedule::from_hamiltonian(&qubit_chain_hamiltonian(), DT, steps)?;
    let v = UnitarySchedule::from_hamiltonian(&oscillator_hamiltonian(), DT, steps)?;
    let named = oscillator_observables();
    let observables: Vec<Observable> = named.iter().map(|(_, o)| o.clone()).collect();
    let psi0 = StateVector::random(8, &mut r);
    let dev = verify_picture_equivalence(&psi0, &u, &v, &observables)?;
    entries.push(Entry::at_most(
        "picture_equivalence.max_deviation",
        dev,
        cfg.tolerance,
    ));

    let mut worst = 0.0f64;
    for _ in 0..HEISENBERG_TRIALS {
        let d = r.random_range(2..=8);
        let n = r.random_range(1..=6);
        let schedule = UnitarySchedule::random(d, n, &mut r)?;
        let a = Observable::random(d, &mut r);
        let psi = StateVector::random(d, &mut r);
        worst = worst.max(heisenberg_deviation(&psi, &schedule, &a)?);
    }
    entries.push(Entry::at_most(
        "heisenberg_identity.max_deviation",
        worst,
        cfg.tolerance,
    ));

    let bell = bell_alternate_decomposition()?;
    entries.push(Entry::at_most(
        "bell.alternate_second_singular_value",
        bell.max_alternate_second_value(),
        cfg.tolerance,
    ));
    entries.push(Entry::at_most(
        "bell.original_deviation_from_1/sqrt2",
        bell.max_original_deviation(),
        cfg.tolerance,
    ));

    let dec = Decomposition::computational(vec![2, 2])?;
    let q = UnitarySchema::new(4, 1, DEFAULT_PROBES, cfg.seed)?;
    let group: Vec<_> = (0..20)
        .map(|_| {
            product_similarity(
                &[Unitary::random(2, &mut r), Unitary::random(2, &mut r)],
                &dec,
            )
            .map(|w| ExtendedSimilarity::constant(w, 1))
        })
        .collect::<Result<_, _>>()?;
    let mut states: Vec<StateVector> = bell_states().into_iter().map(|(_, s)| s).collect();
    states.extend((0..4).map(|i| StateVector::basis(4, i)));
    let set = InstanceSet::sampled(
        states
            .into_iter()
            .map(|s| Instance::new(s, vec![Unitary::identity(4)]))
            .collect(),
        cfg.seed,
    );
    let inv = check_invariance(&q, &entangled_cut(dec, 1)?, &group, &set)?;
    entries.push(Entry::equals(
        "entangled_cut.classification",
        inv.classification,
        Classification::InvariantNontrivial,
    ));
    Ok((
        entries,
        json!({
            "grid_points": cfg.grid_points,
            "dt": DT,
            "observables": named.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>(),
            "heisenberg_trials": HEISENBERG_TRIALS,
            "bell": bell,
            "entangled_cut": inv,
        }),
    ))
}

pub fn demo_measurement(cfg: &RunConfig) -> Result<Report, CliError> {
    report("demo measurement", cfg, measurement(cfg))
}

fn measurement(cfg: &RunConfig) -> SuiteResult {
    let mut r = rng(cfg, 3);
    let raw = [
        Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)),
        Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)),
    ];
    let norm = (raw[0].norm_sqr() + raw[1].norm_sqr()).sqrt();
    let m = measurement_chain(raw[0] / norm, raw[1] / norm)?;
    let entries = vec![
        Entry::near(
            "correlation_before",
            m.correlation_before,
            0.0,
            cfg.tolerance,
        ),
        Entry::near("correlation_after", m.correlation_after, 1.0, cfg.tolerance),
        Entry::at_most("branch_deviation", m.branch_deviation, cfg.tolerance),
        Entry::equals("nonzero_amplitudes", m.nonzero_amplitudes, 2),
    ];
    Ok((
        entries,
        json!({
            "alpha": m.alpha,
            "beta": m.beta,
            "correlation_after_apparatus": m.correlation_after_apparatus,
            "branch_weights": m.branch_weights,
        }),
    ))
}

pub fn demo_hamiltonian(cfg: &RunConfig) -> Result<Report, CliError> {
    report("demo hamiltonian", cfg, hamiltonian(cfg))
}

fn driven_oscillator() -> DrivingHamiltonian {
    DrivingHamiltonian::with_gradient(
        "driven",
        |q: &[f64], p: &[f64], t| 0.5 * (p[0] * p[0] + q[0] * q[0]) - q[0] * (2.0 * t).sin(),
        |q: &[f64], p: &[f64], t| (vec![q[0] - (2.0 * t).sin()], vec![p[0]]),
    )
}

fn point(r: &mut ChaCha8Rng, n: usize) -> PhasePoint {
    PhasePoint {
        q: (0..n).map(|_| r.random_range(-2.0..2.0)).collect(),
        p: (0..n).map(|_| r.random_range(-2.0..2.0)).collect(),
    }
}

fn hamiltonian(cfg: &RunConfig) -> SuiteResult {
    let steps = cfg.steps;
    if steps < 2 {
        return Err(CliError::Usage("need at least 2 integration steps".into()));
    }
    let mut r = rng(cfg, 4);
    let harmonic = Catalog::Harmonic.build()?;
    let driven = driven_oscillator();
    let tau = 1.0;

    let h21 = compose_hamiltonians(&harmonic, &driven, tau);
    let rev = reverse_hamiltonian(&driven, tau);
    let mut composition = 0.0f64;
    let mut reversal = 0.0f64;
    for _ in 0..3 {
        let z = point(&mut r, 1);
        let direct = integrate(&h21, &z, tau, steps)?;
        let mid = integrate(&harmonic, &z, tau, steps)?;
        composition = composition.max(direct.distance(&integrate(&driven, &mid, tau, steps)?));
        let there = integrate(&driven, &z, tau, steps)?;
        reversal = reversal.max(integrate(&rev, &there, tau, steps)?.distance(&z));
    }

    let z0 = point(&mut r, 2);
    let z1 = point(&mut r, 2);
    let steer = steering_hamiltonian(&z0, &z1, 2.0)?;
    let steering = integrate(&steer, &z0, 2.0, steps)?.distance(&z1);

    let start = PhasePoint::new(vec![1.0], vec![0.0])?;
    let period = integrate(&harmonic, &start, 2.0 * PI, steps)?.distance(&start);
    let coarse = |n: usize| -> Result<f64, CliError> {
        let t = 2.0 * PI / 3.0;
        let z = integrate(&harmonic, &start, t, n)?;
        Ok(((z.q[0] - t.cos()).powi(2) + (z.p[0] + t.sin()).powi(2)).sqrt())
    };
    let ratio = coarse(40)? / coarse(80)?;
    let det = flow_jacobian_determinant(&driven, &point(&mut r, 1), tau, steps.min(2000), 1e-5)?;

    let entries = vec![
        Entry::at_most("composition.max_deviation", composition, 1e-6),
        Entry::at_most("reversal.round_trip", reversal, 1e-6),
        Entry::at_most("steering.target_miss", steering, 1e-6),
        Entry::at_most("harmonic.period_return", period, 1e-8),
        Entry::within("rk4.halving_ratio", ratio, 8.0, 32.0),
        Entry::near("flow.jacobian_determinant", det, 1.0, 1e-4),
    ];
    Ok((
        entries,
        json!({
            "steps": steps,
            "catalog": Catalog::KEYS,
            "steer_from": z0,
            "steer_to": z1,
        }),
    ))
}

pub fn demo_gruebleen(cfg: &RunConfig) -> Result<Report, CliError> {
    report("demo gruebleen", cfg, gruebleen(cfg))
}

fn gruebleen(cfg: &RunConfig) -> SuiteResult {
    let n = cfg.size.unwrap_or(4);
    let deck = Deck::build(n, DeckKind::Full)?.with_n_steps(3)?;
    let s = deck.schema();
    let set = random_instances(s, 2 * PAIRS, cfg.seed);
    let mut commuting = 0;
    let mut s_ext = 0;
    for pair in set.instances.chunks(2) {
        let v = construct_gruebleen(s, &pair[0], &pair[1])?;
        let xs = run_instance(s, &pair[0])?.states;
        let ys = run_instance(s, &pair[1])?.states;
        let moved = transform_instance(s, &v, &pair[0])?;
        if (0..xs.len()).all(|k| v.maps[k].image(xs[k]) == ys[k]) && moved == pair[1] {
            commuting += 1;
        }
        if check_property_s_ext(s, &v.maps)?.holds {
            s_ext += 1;
        }
    }

    let q = UnitarySchema::new(4, 4, DEFAULT_PROBES, cfg.seed)?;
    let mut r = rng(cfg, 5);
    let mut worst = 0.0f64;
    let mut q_ext = 0;
    for _ in 0..PAIRS {
        let mut inst = || -> Result<_, CliError> {
            Ok(UnitarySchedule::random(4, 4, &mut r)?.to_instance(StateVector::random(4, &mut r)))
        };
        let a = inst()?;
        let b = inst()?;
        let v = construct_gruebleen(&q, &a, &b)?;
        let xs = run_instance(&q, &a)?.states;
        let ys = run_instance(&q, &b)?.states;
        for k in 0..xs.len() {
            worst = worst.max(v.maps[k].apply(&xs[k]).distance(&ys[k]));
        }
        if check_property_s_ext(&q, &v.maps)?.holds {
            q_ext += 1;
        }
    }
    let entries = vec![
        Entry::equals("full_deck.commuting_pairs", commuting, PAIRS),
        Entry::equals("full_deck.property_s_ext", s_ext, PAIRS),
        Entry::at_most("unitary.max_deviation", worst, cfg.tolerance),
        Entry::equals("unitary.property_s_ext", q_ext, PAIRS),
    ];
    Ok((
        entries,
        json!({ "cards": n, "finite_steps": 3, "unitary_dim": 4, "unitary_steps": 4, "pairs": PAIRS }),
    ))
}

pub fn verify_theorem(cfg: &RunConfig) -> Result<Report, CliError> {
    report("verify theorem", cfg, theorem(cfg))
}

fn theorem(cfg: &RunConfig) -> SuiteResult {
    let n = cfg.size.unwrap_or(4);
    if n == 0 || n > THEOREM_MAX_SIZE {
        return Err(CliError::Usage(format!(
            "theorem size must be in 1..={THEOREM_MAX_SIZE}, got {n}"
        )));
    }
    let schema = TheorySchema::symmetric(n, 2)?;
    let config = TheoremConfig {
        max_states: n.max(5),
        seed: cfg.seed,
        ..TheoremConfig::default()
    };
    let rep = spectacles::similarity::verify_triviality_theorem(&schema, &config)?;
    let mut entries = Vec::new();
    let sweep = rep.state_propositions.as_ref();
    entries.push(
        Entry::equals(
            "symmetric.invariant_state_propositions",
            sweep.map(|s| s.invariant),
            Some(2),
        )
        .with_witness(&sweep.map(|s| &s.nontrivial_invariant)),
    );
    if let Some(p) = &rep.instance_pairs {
        entries.push(Entry::equals(
            "symmetric.instance_pairs_transported",
            p.transported,
            p.pairs,
        ));
    }
    entries.push(Entry::equals(
        "symmetric.conclusion",
        rep.conclusion,
        Conclusion::Confirmed,
    ));

    let half = Deck::build(4, DeckKind::Half)?;
    let half_cfg = TheoremConfig {
        group: GroupChoice::Candidates(half.half_swap_coset_candidates()?),
        seed: cfg.seed,
        ..TheoremConfig::default()
    };
    let half_rep = spectacles::similarity::verify_triviality_theorem(half.schema(), &half_cfg)?;
    entries.push(Entry::equals(
        "half_deck.preconditions_met",
        half_rep.preconditions_met,
        false,
    ));
    let exhibited = half_rep.exhibited.as_ref().map(|e| e.classification);
    let mut e = Entry::equals(
        "half_deck.exhibited",
        exhibited,
        Some(Classification::InvariantNontrivial),
    );
    if let Some(x) = &half_rep.exhibited {
        e = e.with_witness(x);
    }
    entries.push(e);
    Ok((entries, json!({ "symmetric": rep, "half_deck": half_rep })))
}

type Suite = fn(&RunConfig) -> SuiteResult;

pub fn verify_all(cfg: &RunConfig) -> Result<Report, CliError> {
    let suites: [(&str, Suite); 7] = [
        ("decks", decks),
        ("shift", shift),
        ("quantum-pictures", quantum_pictures),
        ("measurement", measurement),
        ("hamiltonian", hamiltonian),
        ("gruebleen", gruebleen),
        ("theorem", theorem),
    ];
    let mut entries = Vec::new();
    let mut details = serde_json::Map::new();
    for (name, suite) in suites {
        let (es, d) = suite(cfg)?;
        entries.extend(es.into_iter().map(|mut e| {
            e.name = format!("{name}/{}", e.name);
            e
        }));
        details.insert(name.to_string(), d);
    }
    Ok(Report::new("verify all", cfg.clone(), entries).with_details(Value::Object(details)))
}

/// Where `maximal-group` gets its candidate bijections.
#[derive(Debug, Clone, Default)]
pub struct CandidateOptions {
    pub supplied: Vec<Vec<usize>>,
    pub random: usize,
    /// Forces the candidate-restricted search even for small schemata.
    pub restricted: bool,
}

/// Parses `"01|23"` or `"0123"` into an arrangement and split flag.
fn parse_deck_label(label: &str) -> Option<(Vec<usize>, bool)> {
    let split = label.contains('|');
    let (a, b) = label.split_once('|').unwrap_or((label, ""));
    if split && a.len() != b.len() {
        return None;
    }
    let cards: Option<Vec<usize>> = a
        .chars()
        .chain(b.chars())
        .map(|c| c.to_digit(10).map(|d| d as usize))
        .collect();
    let cards = cards?;
    let mut sorted = cards.clone();
    sorted.sort_unstable();
    (sorted == (0..cards.len()).collect::<Vec<_>>()).then_some((cards, split))
}

/// Bijections induced by permuting card positions, when every state label is
/// a card arrangement. The half swap `i → i + n/2` comes first.
fn position_candidates(schema: &TheorySchema) -> Option<(Vec<StateMap>, StateMap)> {
    let labels = schema.states().labels();
    let parsed: Vec<(Vec<usize>, bool)> = labels
        .iter()
        .map(|l| parse_deck_label(l))
        .collect::<Option<_>>()?;
    let n = parsed.first()?.0.len();
    if n == 0 || n % 2 == 1 || parsed.iter().any(|(a, _)| a.len() != n) {
        return None;
    }
    let lookup: HashMap<&(Vec<usize>, bool), usize> =
        parsed.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let induced = |perm: &[usize]| -> Option<StateMap> {
        let images = parsed
            .iter()
            .map(|(a, split)| {
                let mut out = vec![0; n];
                for (i, &card) in a.iter().enumerate() {
                    out[perm[i]] = card;
                }
                lookup.get(&(out, *split)).copied()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(StateMap::from_images(images))
    };
    let swap: Vec<usize> = (0..n).map(|i| (i + n / 2) % n).collect();
    let x = induced(&swap)?;
    let all = (0..n).permutations(n).filter_map(|p| induced(&p)).collect();
    Some((all, x))
}

pub fn maximal_group(
    cfg: &RunConfig,
    schema: &TheorySchema,
    options: &CandidateOptions,
) -> Result<Report, CliError> {
    let n = schema.len();
    let exhaustive = !options.restricted
        && options.supplied.is_empty()
        && options.random == 0
        && n <= DEFAULT_MAX_GROUP_STATES;
    let mut half_swap = None;
    let group = if exhaustive {
        maximal_similarity_group(schema, DEFAULT_MAX_GROUP_STATES)?
    } else {
        let mut candidates: Vec<StateMap> = schema.actions().cloned().collect();
        if let Some((induced, x)) = position_candidates(schema) {
            candidates.extend(induced);
            half_swap = Some(x);
        }
        for s in &options.supplied {
            candidates.push(StateMap::new(s.clone(), n)?);
        }
        let mut r = rng(cfg, 6);
        for _ in 0..options.random {
            let mut v: Vec<usize> = (0..n).collect();
            v.shuffle(&mut r);
            candidates.push(StateMap::from_images(v));
        }
        candidate_similarity_group(schema, &candidates)?
    };

    let mut entries = vec![Entry::equals("group.closed", group.is_group, true)];
    if schema.is_reversible() {
        let all_k = schema.actions().all(|d| group.contains(d));
        entries.push(Entry::equals("group.contains_kinematic_set", all_k, true));
    }
    if let Some(x) = &half_swap {
        entries.push(Entry::equals(
            "group.contains_half_swap",
            group.contains(x),
            true,
        ));
    }
    let labels = schema.states().labels();
    let elements: Vec<Value> = group
        .elements
        .iter()
        .map(|v| {
            json!({
                "table": v.images(),
                "map": (0..n).map(|i| format!("{}->{}", labels[i], labels[v.image(i)])).collect::<Vec<_>>(),
                "kinematic": schema.kinematic_index(v).is_some(),
                "half_swap": half_swap.as_ref() == Some(v),
            })
        })
        .collect();
    Ok(
        Report::new("maximal-group", cfg.clone(), entries).with_details(json!({
            "states": n,
            "search": to_value(&group.search),
            "order": group.order(),
            "candidates_tested": group.candidates_tested,
            "elements": elements,
        })),
    )
}

pub fn export_deck(n: usize, kind: DeckKind) -> Result<String, CliError> {
    let mut s = Deck::build(n, kind)?.schema().to_json();
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    #[test]
    fn deck_label_parsing() {
        assert_eq!(parse_deck_label("01|23"), Some((vec![0, 1, 2, 3], true)));
        assert_eq!(parse_deck_label("2013"), Some((vec![2, 0, 1, 3], false)));
        assert_eq!(parse_deck_label("a"), None);
        assert_eq!(parse_deck_label("0|12"), None);
        assert_eq!(parse_deck_label("00"), None);
    }

    #[test]
    fn half_deck_candidate_group_has_order_eight() {
        let half = Deck::build(4, DeckKind::Half).unwrap();
        let r = maximal_group(&cfg(), half.schema(), &CandidateOptions::default()).unwrap();
        assert!(r.passed(), "{}", r.summary());
        let d = r.details.unwrap();
        assert_eq!(d["order"], 8);
        assert_eq!(d["search"], "candidate-restricted");
    }

    #[test]
    fn small_schema_is_exhaustive() {
        let s = TheorySchema::cyclic(3, 1).unwrap();
        let r = maximal_group(&cfg(), &s, &CandidateOptions::default()).unwrap();
        assert!(r.passed());
        assert_eq!(r.details.unwrap()["search"], "exhaustive");
    }

    #[test]
    fn supplied_candidates_are_validated() {
        let s = TheorySchema::cyclic(3, 1).unwrap();
        let opts = CandidateOptions {
            supplied: vec![vec![0, 1, 7]],
            ..Default::default()
        };
        assert!(maximal_group(&cfg(), &s, &opts).is_err());
    }

    #[test]
    fn demos_pass() {
        for f in [demo_decks, demo_shift, demo_measurement, verify_theorem] {
            let r = f(&cfg()).unwrap();
            assert!(r.passed(), "{}", r.summary());
        }
    }

    #[test]
    fn odd_deck_skips_half_checks() {
        let c = RunConfig {
            size: Some(3),
            ..cfg()
        };
        let r = demo_decks(&c).unwrap();
        assert!(r.passed());
        assert!(r
            .entries
            .iter()
            .any(|e| e.status == crate::report::Status::Skipped));
    }

    #[test]
    fn theorem_size_guard() {
        let c = RunConfig {
            size: Some(9),
            ..cfg()
        };
        assert!(matches!(verify_theorem(&c), Err(CliError::Usage(_))));
    }
}
