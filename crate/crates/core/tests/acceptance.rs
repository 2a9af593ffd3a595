//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Every criterion is exact; runtime limits are wall-clock.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hcs::autgroup::{translation, Classification};
use hcs::groups::{is_isomorphism, pair};
use hcs::prescribe::OddConstruction;
use hcs::{
    automorphism_group, brute_force_aut, check_compatible, classify, construct_binary,
    construct_odd, develop, double, hardcoded_rigid_hcs13, is_isomorphic, make_cyclic,
    make_quaternion8, modified_starter, parse_group_spec, validate, verify_starter, CycleSystem,
    DoublingInput, Element, FiniteGroup, SearchBudget, Starter, Vertex,
};

type Outcome = Result<String, String>;
type Criterion<'a> = (
    &'static str,
    &'static str,
    Box<dyn FnOnce() -> Outcome + 'a>,
);

fn ensure(cond: bool, why: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, format!("took {took:?}, limit {limit:?}"))
}

fn els(xs: [usize; 6]) -> Vec<Element> {
    xs.map(Element).to_vec()
}

struct Example {
    z6: FiniteGroup,
    a1: Starter,
    b1: Starter,
    h1: CycleSystem,
    h2: CycleSystem,
    doubled: CycleSystem,
}

fn example() -> Result<Example, String> {
    let z6 = make_cyclic(6).map_err(|e| e.to_string())?;
    let a1 = Starter::new(&z6, els([0, 1, 5, 2, 4, 3])).map_err(|e| e.to_string())?;
    let b1 = Starter::new(&z6, els([0, 4, 5, 2, 1, 3])).map_err(|e| e.to_string())?;
    let h1 = develop(&z6, &a1).map_err(|e| e.to_string())?;
    let h2 = develop(&z6, &b1).map_err(|e| e.to_string())?;
    let matched = check_compatible(&h1, &h2, &h2).map_err(|e| e.to_string())?;
    if matched.triples().len() != 3 {
        return Err(format!("{} matched triples", matched.triples().len()));
    }
    // Z6 = Z2 x Z3 with the Z3 factor {0, 2, 4}: cycles are read along its orbit
    let triples = [0u32, 2, 4]
        .iter()
        .map(|&s| {
            let shift = |st: &Starter| -> Vec<u32> {
                st.alphas()
                    .iter()
                    .map(|x| (x.index() as u32 + s) % 6)
                    .collect()
            };
            [shift(&a1), shift(&b1), shift(&b1)]
        })
        .collect();
    let input = DoublingInput::from_triples(triples).map_err(|e| e.to_string())?;
    let doubled = double(&input).map_err(|e| e.to_string())?;
    Ok(Example {
        z6,
        a1,
        b1,
        h1,
        h2,
        doubled,
    })
}

fn hcs3() -> CycleSystem {
    CycleSystem::from_sequences([vec![Vertex::Plain(0), Vertex::Plain(1), Vertex::Plain(2)]])
        .unwrap()
}

fn hcs5() -> CycleSystem {
    let p = |xs: [u32; 5]| xs.map(Vertex::Plain).to_vec();
    CycleSystem::from_sequences([p([0, 1, 2, 3, 4]), p([0, 2, 4, 1, 3])]).unwrap()
}

const ODD_CORPUS: [&str; 6] = ["Z1", "Z3", "Z5", "Z7", "Z9", "Z3xZ3"];

fn odd_corpus() -> Vec<(FiniteGroup, OddConstruction)> {
    ODD_CORPUS
        .iter()
        .map(|spec| {
            let g = parse_group_spec(spec).unwrap();
            let built = construct_odd(&g, SearchBudget::default()).unwrap();
            (g, built)
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let h = hardcoded_rigid_hcs13();
    ensure(h.v() == 13, "order is not 13")?;
    ensure(validate(&h).ok, "rigid HCS(13) fails validation")?;
    let aut = automorphism_group(&h).map_err(|e| e.to_string())?;
    ensure(aut.order() == 1, format!("|Aut| = {}", aut.order()))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("valid, |Aut| = 1 in {:?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let ex = example()?;
    for s in [&ex.a1, &ex.b1] {
        ensure(
            verify_starter(&ex.z6, s.alphas()).unwrap().is_ok(),
            format!("starter {s} rejected"),
        )?;
    }
    for h in [&ex.h1, &ex.h2] {
        ensure(h.v() == 7 && validate(h).ok, "development is not an HCS(7)")?;
    }
    ensure(
        ex.doubled.v() == 13 && validate(&ex.doubled).ok,
        "doubled system invalid",
    )?;
    let aut = automorphism_group(&ex.doubled).map_err(|e| e.to_string())?;
    ensure(aut.order() == 3, format!("|Aut| = {}", aut.order()))?;
    let abstract_aut = aut.to_finite_group("Aut").unwrap();
    let z3 = make_cyclic(3).unwrap();
    let witness = is_isomorphic(&abstract_aut, &z3)
        .unwrap()
        .ok_or("Aut is not isomorphic to Z3")?;
    ensure(
        is_isomorphism(&abstract_aut, &z3, &witness),
        "witness fails",
    )?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("HCS(13) with Aut = Z3 in {:?}", start.elapsed()))
}

fn criterion_3() -> Outcome {
    let ex = example()?;
    let (k, star) = modified_starter(&ex.z6, &ex.b1).map_err(|e| e.to_string())?;
    let got = hcs::canonical_cycle(&star.vertices()).unwrap();
    let want = hcs::canonical_cycle(&ex.a1.vertices()).unwrap();
    ensure(got == want, format!("C* = ({got}), expected ({want})"))?;
    Ok(format!("k = {k}, C* = ({got})"))
}

fn criterion_4(corpus: &[(FiniteGroup, OddConstruction)], elapsed: Duration) -> Outcome {
    ensure(
        elapsed < Duration::from_secs(60),
        format!("corpus took {elapsed:?}, limit 60s"),
    )?;
    let mut orders = Vec::new();
    for (g, built) in corpus {
        // the trivial group is realised by the rigid HCS(13)
        let v = if g.order() == 1 {
            13
        } else {
            4 * g.order() + 1
        };
        ensure(
            built.system.v() == v && validate(&built.system).ok,
            format!("{}: not a valid HCS({v})", g.name()),
        )?;
        let aut = automorphism_group(&built.system).unwrap();
        let abstract_aut = aut.to_finite_group("Aut").unwrap();
        let witness = is_isomorphic(&abstract_aut, g)
            .unwrap()
            .ok_or_else(|| format!("{}: |Aut| = {}, not isomorphic", g.name(), aut.order()))?;
        ensure(
            is_isomorphism(&abstract_aut, g, &witness),
            format!("{}: witness fails", g.name()),
        )?;
        orders.push(format!("{}->HCS({v})", g.name()));
    }
    Ok(format!("{} in {elapsed:?}", orders.join(", ")))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let q8 = make_quaternion8();
    let built = construct_binary(&q8, 3, SearchBudget::default()).map_err(|e| e.to_string())?;
    let system = &built.system;
    ensure(
        system.v() == 25 && validate(system).ok,
        "not a valid HCS(25)",
    )?;
    let aut = automorphism_group(system).unwrap();
    ensure(aut.order() == 8, format!("|Aut| = {}", aut.order()))?;
    let abstract_aut = aut.to_finite_group("Aut").unwrap();
    let witness = is_isomorphic(&abstract_aut, &q8)
        .unwrap()
        .ok_or("Aut is not isomorphic to Q8")?;
    ensure(
        is_isomorphism(&abstract_aut, &q8, &witness),
        "witness fails",
    )?;

    let g = &built.trace.g;
    let d = built.trace.d;
    for x in g.elements() {
        let tau = translation(system, g, x).unwrap();
        let in_h = x.index() % d == 0;
        ensure(
            aut.contains(&tau) == in_h,
            format!(
                "translation by {x}: in Aut = {}, in H = {in_h}",
                aut.contains(&tau)
            ),
        )?;
    }
    ensure(
        q8.elements()
            .all(|h| pair(h, Element(0), d).index().is_multiple_of(d)),
        "H is not the pairs (h, 0)",
    )?;
    within(start, Duration::from_secs(300))?;
    Ok(format!(
        "HCS(25), Aut = Q8, translations checked for all {} elements, {:?}",
        g.order(),
        start.elapsed()
    ))
}

fn relabelled(system: &CycleSystem, seed: u64) -> CycleSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut image = system.vertices().to_vec();
    image.shuffle(&mut rng);
    system
        .relabel(|x| image[system.position(x).unwrap()])
        .unwrap()
}

fn criterion_6() -> Outcome {
    let ex = example()?;
    let bases = [
        ("HCS(3)", hcs3()),
        ("HCS(5)", hcs5()),
        ("H1", ex.h1),
        ("H2", ex.h2),
    ];
    let mut checked = 0;
    for (name, base) in &bases {
        let mut systems = vec![base.clone()];
        systems.extend((0..20).map(|seed| relabelled(base, seed)));
        for (i, s) in systems.iter().enumerate() {
            let fast = automorphism_group(s).unwrap();
            let brute = brute_force_aut(s).unwrap();
            ensure(
                fast == brute,
                format!(
                    "{name} relabelling {i}: alignment {} vs brute force {}",
                    fast.order(),
                    brute.order()
                ),
            )?;
            checked += 1;
        }
    }
    Ok(format!("{checked} systems, identical element sets"))
}

fn involution_shape(system: &CycleSystem, aut: &hcs::PermGroup) -> Result<(), String> {
    let cycles = system.index_cycles();
    for inv in aut.involutions() {
        ensure(
            inv.fixed_points().len() == 1,
            format!("involution with {} fixed points", inv.fixed_points().len()),
        )?;
        for c in &cycles {
            let image: Vec<Vertex> = c
                .iter()
                .map(|&x| system.vertices()[inv.apply(x as usize)])
                .collect();
            let mapped = hcs::canonical_cycle(&image).unwrap();
            let here = hcs::canonical_cycle(
                &c.iter()
                    .map(|&x| system.vertices()[x as usize])
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            ensure(mapped == here, "involution moves a cycle")?;
        }
    }
    Ok(())
}

fn criterion_7(corpus: &[(FiniteGroup, OddConstruction)]) -> Outcome {
    let ex = example()?;
    let q8 = construct_binary(&make_quaternion8(), 3, SearchBudget::default())
        .map_err(|e| e.to_string())?
        .system;
    let mut systems = vec![
        ("rigid HCS(13)".to_string(), hardcoded_rigid_hcs13()),
        ("H1".into(), ex.h1),
        ("H2".into(), ex.h2),
        ("example HCS(13)".into(), ex.doubled),
        ("Q8 HCS(25)".into(), q8),
        ("HCS(3)".into(), hcs3()),
        ("HCS(5)".into(), hcs5()),
    ];
    systems.extend(
        corpus
            .iter()
            .map(|(g, b)| (format!("odd {}", g.name()), b.system.clone())),
    );
    let mut tags = Vec::new();
    for (name, s) in &systems {
        let aut = automorphism_group(s).unwrap();
        let class = classify(&aut, s.v());
        ensure(
            class != Classification::Other,
            format!("{name}: classified Other"),
        )?;
        if aut.order().is_multiple_of(2) {
            ensure(
                matches!(class, Classification::Binary | Classification::AGL1p),
                format!("{name}: even order but {class}"),
            )?;
        }
        involution_shape(s, &aut).map_err(|e| format!("{name}: {e}"))?;
        tags.push(format!("{name}:{}/{class}", aut.order()));
    }
    Ok(tags.join(", "))
}

fn criterion_8(corpus: &[(FiniteGroup, OddConstruction)]) -> Outcome {
    let ex = example()?;
    let mut doubled = vec![("example HCS(13)".to_string(), ex.doubled)];
    // every non-trivial odd construction is a doubling with n = |G| >= 3
    doubled.extend(
        corpus
            .iter()
            .filter(|(g, _)| g.order() > 1)
            .map(|(g, b)| (format!("odd {}", g.name()), b.system.clone())),
    );
    for (name, s) in &doubled {
        let aut = automorphism_group(s).unwrap();
        let inf = s.position(Vertex::Infinity).ok_or("no inf")?;
        ensure(
            aut.fixes_point(inf),
            format!("{name}: an automorphism moves inf"),
        )?;
    }
    Ok(format!(
        "{} doubled systems, inf fixed by every automorphism",
        doubled.len()
    ))
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in 0..2 {
        let path = dir.path().join(format!("run{run}.hcs"));
        let status = Command::new(env!("CARGO_BIN_EXE_hcs"))
            .args(["construct", "odd", "--group", "Z5", "--seed", "7", "-o"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(
            status.status.success(),
            format!(
                "run {run} failed: {}",
                String::from_utf8_lossy(&status.stderr)
            ),
        )?;
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    ensure(!outputs[0].is_empty(), "empty output")?;
    ensure(outputs[0] == outputs[1], "outputs differ")?;
    Ok(format!("{} identical bytes", outputs[0].len()))
}

fn main() {
    // libtest flags (e.g. --nocapture, filters) are accepted and ignored
    let start = Instant::now();
    let corpus = odd_corpus();
    let corpus_time = start.elapsed();

    let criteria: Vec<Criterion> = vec![
        (
            "AC1",
            "rigid HCS(13) is valid with trivial group",
            Box::new(criterion_1),
        ),
        (
            "AC2",
            "example replay: doubled HCS(13) has Aut = Z3",
            Box::new(criterion_2),
        ),
        ("AC3", "modified starter of B1 is A1", Box::new(criterion_3)),
        (
            "AC4",
            "odd-order pipeline over Z1, Z3, Z5, Z7, Z9, Z3xZ3",
            Box::new(|| criterion_4(&corpus, corpus_time)),
        ),
        (
            "AC5",
            "binary pipeline: Q8 with d = 3",
            Box::new(criterion_5),
        ),
        (
            "AC6",
            "alignment method equals brute force",
            Box::new(criterion_6),
        ),
        (
            "AC7",
            "even-order dichotomy and involution shape",
            Box::new(|| criterion_7(&corpus)),
        ),
        (
            "AC8",
            "doubled systems fix inf",
            Box::new(|| criterion_8(&corpus)),
        ),
        (
            "AC9",
            "CLI construction is byte-reproducible",
            Box::new(criterion_9),
        ),
    ];

    let mut failed = 0;
    for (id, title, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {id} {title}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {id} {title}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
