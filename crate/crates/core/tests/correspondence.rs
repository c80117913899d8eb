use modalkit::correspondence::{axiom_report, AxiomId};
use modalkit::search::{find_countermodel, recheck, FrameConstraint, SearchOptions, SearchSpec};
use modalkit::semantics::frame_valid;
use modalkit::{parse, Budget, Frame};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Written against the pair list only, so it shares nothing with the library's checks.
fn oracle(id: AxiomId, fr: &Frame) -> bool {
    let n = fr.len();
    let r: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| fr.pairs().contains(&(i, j))).collect())
        .collect();
    let all3 =
        || (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))));
    match id {
        AxiomId::K => true,
        AxiomId::T => (0..n).all(|a| r[a][a]),
        AxiomId::Four => all3().all(|(a, b, c)| !(r[a][b] && r[b][c]) || r[a][c]),
        AxiomId::B => (0..n).all(|a| (0..n).all(|b| !r[a][b] || r[b][a])),
        AxiomId::D => (0..n).all(|a| r[a].iter().any(|&x| x)),
        AxiomId::Five => all3().all(|(a, b, c)| !(r[a][b] && r[a][c]) || r[b][c]),
        AxiomId::N | AxiomId::BF | AxiomId::CBF => unreachable!(),
    }
}

fn random_frame(rng: &mut ChaCha8Rng, n: usize) -> Frame {
    let density = rng.gen_range(0.1..0.9);
    let mut bits = 0u64;
    for b in 0..n * n {
        if rng.gen_bool(density) {
            bits |= 1 << b;
        }
    }
    Frame::from_relation_bits(n, bits)
}

#[test]
fn random_larger_frames_match_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let budget = Budget::default();
    for round in 0..120 {
        let n = if round % 3 == 0 { 5 } else { 4 };
        let fr = random_frame(&mut rng, n);
        let report = axiom_report(&fr, &budget).unwrap();
        assert!(report.consistent(), "{:?}", fr.pairs());
        for id in [
            AxiomId::K,
            AxiomId::T,
            AxiomId::Four,
            AxiomId::B,
            AxiomId::D,
            AxiomId::Five,
        ] {
            let holds = frame_valid(&fr, &id.scheme(), &budget).unwrap().holds;
            assert_eq!(holds, oracle(id, &fr), "{id} on {:?}", fr.pairs());
        }
    }
}

#[test]
fn witnesses_recheck_on_random_frames() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let budget = Budget::default();
    let model_of = |fr: &Frame| modalkit::Model::Prop(modalkit::PropModel::empty(fr.clone()));
    for _ in 0..60 {
        let fr = random_frame(&mut rng, 4);
        for id in AxiomId::PROPOSITIONAL {
            let v = frame_valid(&fr, &id.scheme(), &budget).unwrap();
            if let Some(w) = v.witness {
                assert!(w.refutes(&model_of(&fr), &id.scheme()).unwrap(), "{id}");
            }
        }
    }
}

#[test]
fn argument_without_symmetry() {
    // Dropping the symmetry requirement still leaves no countermodel: the
    // scheme premise alone forces every world to see only itself.
    let spec = SearchSpec {
        max_worlds: 4,
        premise_formulas: vec![parse("<>g").unwrap()],
        premise_schemes: vec![parse("P => []P").unwrap()],
        constraints: vec![],
        ..SearchSpec::new(parse("g").unwrap())
    };
    let opts = SearchOptions {
        jobs: 4,
        ..SearchOptions::default()
    };
    assert!(find_countermodel(&spec, &opts).unwrap().is_none());

    let weaker = SearchSpec {
        premise_schemes: vec![],
        ..spec.clone()
    };
    let cm = find_countermodel(&weaker, &opts)
        .unwrap()
        .expect("countermodel");
    recheck(&weaker, &cm).unwrap();
    assert_eq!(cm.worlds(), 2);

    let symmetric_only = SearchSpec {
        constraints: vec![FrameConstraint::Symmetric],
        ..weaker
    };
    assert!(find_countermodel(&symmetric_only, &opts).unwrap().is_some());
}
