//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints exactly one PASS or FAIL line.

use std::panic;
use std::process::{Command, ExitCode};

use mastermind_core::analysis::{pattern_informativeness, Pattern};
use mastermind_core::baselines::forced_facts_bruteforce;
use mastermind_core::lars::Cell;
use mastermind_core::lattice::HypothesisLattice;
use mastermind_core::reasoner::{interpret_colors, interpret_places, order_among, propagate, switch_candidates, Hypothesis};
use mastermind_core::{
    enumerate_codes, score, solve_secret, Code, CodeSpace, Color, ColorModel, Comparator, CountConstraint, Feedback,
    GameConfig, HistoryEntry, Model, Outcome, PlaceModel, SolveError, Strategy, Transcript,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

const REFERENCE: &str = include_str!("../fixtures/reference_game.txt");

fn ensure(cond: bool, message: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message.into())
    }
}

fn reference_rows(config: &GameConfig, k: usize) -> Vec<HistoryEntry> {
    Transcript::parse(config, REFERENCE).expect("fixture parses").entries.into_iter().take(k).collect()
}

fn code(config: &GameConfig, text: &str) -> Code {
    config.parse_code(text).expect("valid code")
}

fn golden_replay() -> Result<String, String> {
    let config = GameConfig::default();
    let t = Transcript::parse(&config, REFERENCE).map_err(|e| e.to_string())?;
    let checks = t.verify().ok_or("fixture has no secret")?;
    let got: Vec<String> = checks.iter().map(|c| c.recomputed.to_string()).collect();
    let want = ["1W 1B", "0W 0B", "3W 1B", "3W 2B", "3W 2B", "5W 0B"];
    ensure(got == want, format!("recomputed {got:?}"))?;
    ensure(checks.iter().all(|c| c.passed()), "a recorded row differs")?;
    Ok(format!("6/6 rows rescore to {}", got.join(" / ")))
}

fn row_one_order() -> Result<String, String> {
    let config = GameConfig::default();
    let models = interpret_colors(&code(&config, "B B Y Y R"), Feedback::new(1, 1), &config).map_err(|e| e.to_string())?;
    let rendered: Vec<String> = models.iter().take(3).map(|m| m.render(&config).to_string()).collect();
    ensure(rendered == ["[1B][1Y] noR", "[1B] 1R noY", "[1Y] 1R noB"], format!("got {rendered:?}"))?;
    Ok(rendered.join(" < "))
}

fn cross_row_merge() -> Result<String, String> {
    let config = GameConfig::default();
    let rows = reference_rows(&config, 2);
    let row1 = interpret_colors(&rows[0].guess, rows[0].feedback, &config).map_err(|e| e.to_string())?;
    let row2 = interpret_colors(&rows[1].guess, rows[1].feedback, &config).map_err(|e| e.to_string())?;
    ensure(row2.len() == 1, format!("row 2 has {} models", row2.len()))?;
    ensure(row2[0].render(&config).to_string() == "noB noO", "row 2 is not noB noO")?;
    let mut lattice = HypothesisLattice::new();
    lattice.push(row1);
    let first = lattice.top().unwrap().selected().merge(&row2[0], &config);
    ensure(first.is_contradiction(), "first merge did not clash")?;
    let merged = loop {
        lattice.backtrack().map_err(|_| "lattice exhausted")?;
        if let Outcome::Model(m) = lattice.top().unwrap().selected().merge(&row2[0], &config) {
            break m;
        }
    };
    let text = merged.normalize(&config).render(&config).to_string();
    ensure(text == "[1Y] 1R noB noO", format!("merged to {text}"))?;
    Ok(format!("Contradiction, then alternative {} gives {text}", lattice.cursors()[0] + 1))
}

fn multiset_preference() -> Result<String, String> {
    let config = GameConfig::default();
    let a = ColorModel::parse(&config, "[1Y][2R][2G]").map_err(|e| e.to_string())?;
    let b = ColorModel::parse(&config, "[1Y][3R][1G]").map_err(|e| e.to_string())?;
    let all: Vec<Code> = enumerate_codes(&config).collect();
    let count = |m: &ColorModel| all.iter().filter(|c| m.satisfied_by(c)).count();
    let (na, nb) = (count(&a), count(&b));
    ensure((na, nb) == (30, 20), format!("enumerated {na} vs {nb}"))?;
    ensure(a.denotation_count(&config) == 30 && b.denotation_count(&config) == 20, "closed-form count disagrees")?;
    let ordered = order_among(vec![Hypothesis::unranked(b, 2), Hypothesis::unranked(a.clone(), 2)], &all, Comparator::CountBased);
    ensure(ordered[0].model == Model::Color(a), "count-based order put [1Y][3R][1G] first")?;
    Ok(format!("[1Y][2R][2G] = {na} > [1Y][3R][1G] = {nb}"))
}

fn place_pipeline() -> Result<String, String> {
    let config = GameConfig::default();
    let history = reference_rows(&config, 3);
    let colors = ColorModel::parse(&config, "[1Y][2R][2G] noB noO").map_err(|e| e.to_string())?;
    let places = interpret_places(&colors, &history[0].guess, history[0].feedback, &config);
    let rendered: Vec<String> = places.iter().map(|p| format!("{:#}", p.render(&config))).collect();
    ensure(rendered == ["[- - Y - -]", "[- - - Y -]", "[- - - - R]"], format!("places {rendered:?}"))?;
    ensure(propagate(&places[0], &history, &config).is_contradiction(), "[- - Y - -] survived")?;
    let p = propagate(&places[1], &history, &config).model().ok_or("[- - - Y -] contradicted")?;
    let refined = format!("{:#}", p.refined.render(&config));
    ensure(refined == "[- - - Y G]", format!("refined to {refined}"))?;
    ensure(p.count == 3, format!("{} survivors", p.count))?;
    Ok(format!("{} ; [- - Y - -] => Contradiction ; [- - - Y -] => {refined} with 3 codes", rendered.join(" < ")))
}

fn switch_heuristic() -> Result<String, String> {
    let desk = GameConfig::new(4, 6).unwrap();
    let space = CodeSpace::new(&desk);
    let mut pairs = 0usize;
    for g in space.codes() {
        for s in space.codes() {
            if score(g, s) == Feedback::new(2, 2) {
                pairs += 1;
                let transposed = (0..4).any(|i| (i + 1..4).any(|j| g.pawns()[i] != g.pawns()[j] && g.swapped(i, j) == *s));
                ensure(transposed, format!("{} vs {}", desk.format_code(g), desk.format_code(s)))?;
            }
        }
    }
    let config = GameConfig::default();
    let pm = PlaceModel::parse(&config, "[- - - Y G] over [1Y][2R][2G]").map_err(|e| e.to_string())?;
    let names = |v: Vec<Code>| v.iter().map(|c| config.format_code(c)).collect::<Vec<_>>();
    let after4 = names(switch_candidates(&code(&config, "R G R Y G"), &pm, &reference_rows(&config, 4)).ok_or("row 4")?);
    let after5 = names(switch_candidates(&code(&config, "G R R Y G"), &pm, &reference_rows(&config, 5)).ok_or("row 5")?);
    ensure(after4 == ["G R R Y G", "R R G Y G"], format!("after row 4 {after4:?}"))?;
    ensure(after5 == ["R R G Y G"], format!("after row 5 {after5:?}"))?;
    Ok(format!("{pairs} desk (2,2) pairs are transpositions; row 4 -> {{{}}}, row 5 -> {{{}}}", after4.join(", "), after5.join(", ")))
}

fn desk_correctness() -> Result<String, String> {
    let config = GameConfig::new(4, 6).unwrap();
    let space = CodeSpace::new(&config);
    let mut means = Vec::new();
    for strategy in [Strategy::Hybrid(Comparator::Heuristic), Strategy::Filter] {
        let mut rows = 0usize;
        for secret in space.codes() {
            let game = match solve_secret(strategy, secret, &config, &space) {
                Ok(g) => g,
                Err(SolveError::LatticeExhausted) => return Err(format!("{} exhausted on {}", strategy.name(), config.format_code(secret))),
                Err(e) => return Err(format!("{} on {}: {e}", strategy.name(), config.format_code(secret))),
            };
            ensure(game.transcript.entries.last().map(|e| &e.guess) == Some(secret), "last guess is not the secret")?;
            rows += game.transcript.len();
        }
        means.push(format!("{} mean {:.4}", strategy.name(), rows as f64 / space.len() as f64));
    }
    Ok(format!("1296/1296 secrets each; {}", means.join(", ")))
}

/// A random place model. With `around` set, every constraint is one the given
/// code satisfies, so the model is never trivially empty.
fn random_place_model(rng: &mut ChaCha8Rng, config: &GameConfig, around: Option<&Code>) -> PlaceModel {
    let n = config.positions() as u8;
    let m = config.num_colors() as u8;
    let mut colors = ColorModel::any();
    for c in 0..m {
        let constraint = match (rng.gen_range(0..4), around) {
            (0, None) => CountConstraint::Exactly(rng.gen_range(0..=n)),
            (1, None) => CountConstraint::at_least(rng.gen_range(1..=n)),
            (0, Some(code)) => CountConstraint::Exactly(code.count(Color(c)) as u8),
            (1, Some(code)) => CountConstraint::at_least(rng.gen_range(0..=code.count(Color(c)) as u8)),
            _ => CountConstraint::Unconstrained,
        };
        colors.set(Color(c), constraint);
    }
    let cells = (0..n as usize)
        .map(|i| {
            let own = around.map(|code| code.pawns()[i]);
            match rng.gen_range(0..4) {
                0 => Cell::Fixed(own.unwrap_or_else(|| Color(rng.gen_range(0..m)))),
                1 => {
                    let c = rng.gen_range(0..m);
                    if own == Some(Color(c)) {
                        Cell::WILD
                    } else {
                        Cell::Wildcard { excluded: 1 << c }
                    }
                }
                _ => Cell::WILD,
            }
        })
        .collect();
    PlaceModel::from_cells(cells, colors)
}

fn random_code(rng: &mut ChaCha8Rng, config: &GameConfig) -> Code {
    config.code((0..config.positions()).map(|_| Color(rng.gen_range(0..config.num_colors() as u8))).collect()).unwrap()
}

fn oracle_equivalence() -> Result<String, String> {
    let config = GameConfig::new(4, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut contradictions = 0;
    for case in 0..200 {
        let secret = random_code(&mut rng, &config);
        let pm = random_place_model(&mut rng, &config, (case % 2 == 0).then_some(&secret));
        let history: Vec<HistoryEntry> = (0..rng.gen_range(1..4))
            .map(|_| {
                let g = random_code(&mut rng, &config);
                let f = score(&g, &secret);
                HistoryEntry::new(g, f)
            })
            .collect();
        let fast = propagate(&pm, &history, &config);
        ensure(fast == forced_facts_bruteforce(&pm, &history, &config), format!("random case {case} differs"))?;
        contradictions += fast.is_contradiction() as usize;
    }
    let reference = GameConfig::default();
    let history = reference_rows(&reference, 3);
    let colors = ColorModel::parse(&reference, "[1Y][2R][2G] noB noO").map_err(|e| e.to_string())?;
    for text in ["[- - Y - -]", "[- - - Y -]"] {
        let pm = PlaceModel::parse(&reference, text).map_err(|e| e.to_string())?.with_colors(colors.clone());
        ensure(
            propagate(&pm, &history, &reference) == forced_facts_bruteforce(&pm, &history, &reference),
            format!("reference case {text} differs"),
        )?;
    }
    Ok(format!("200 random desk cases ({contradictions} contradictions) and 2 reference cases agree"))
}

fn informativeness() -> Result<String, String> {
    let config = GameConfig::default();
    let space = CodeSpace::new(&config);
    let stats = pattern_informativeness(&config, &space);
    ensure(stats.len() == 7, format!("{} patterns", stats.len()))?;
    let entropy = |p: &str| stats.iter().find(|s| s.pattern.to_string() == p).map(|s| s.entropy).unwrap();
    let mono = entropy("5");
    ensure(stats.iter().filter(|s| s.pattern.to_string() != "5").all(|s| s.entropy > mono), "monochrome not minimal")?;
    let target = entropy("2/2/1");
    ensure(target > mono && target > entropy("4/1"), "2/2/1 does not beat 5 and 4/1")?;
    let frozen = [
        ("2/1/1/1", 3.238307837011656),
        ("1/1/1/1/1", 3.2315534058614332),
        ("2/2/1", 3.1802083717249614),
        ("3/1/1", 3.062869507906071),
        ("3/2", 2.8768825187167777),
        ("4/1", 2.642039614228536),
        ("5", 1.4672737420477164),
    ];
    for (s, (name, h)) in stats.iter().zip(frozen) {
        ensure(s.pattern.to_string() == name && (s.entropy - h).abs() < 1e-9, format!("table drifted at {name}"))?;
    }
    let rank = stats.iter().position(|s| s.pattern == Pattern::new(vec![2, 2, 1])).unwrap() + 1;
    let order: Vec<String> = stats.iter().map(|s| format!("{} {:.4}", s.pattern, s.entropy)).collect();
    Ok(format!("{}; 2/2/1 ranks {rank} of 7 (maximal: {})", order.join(" > "), rank == 1))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_mastermind")).args(args).output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), format!("{args:?} exited with {}", out.status))?;
    Ok(out.stdout)
}

fn determinism() -> Result<String, String> {
    let runs: [&[&str]; 2] = [&["solve", "--secret", "R R G Y G"], &["simulate", "--strategy", "hybrid", "--seed", "1", "-n", "500"]];
    let mut sizes = Vec::new();
    for args in runs {
        let a = run_cli(args)?;
        let b = run_cli(args)?;
        ensure(!a.is_empty() && a == b, format!("{} differs between runs", args[0]))?;
        sizes.push(format!("{} {} bytes", args[0], a.len()));
    }
    Ok(format!("byte-identical reruns: {}", sizes.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("golden replay of the reference game", golden_replay),
        ("row-1 interpretation order", row_one_order),
        ("cross-row merge and lattice advance", cross_row_merge),
        ("multiset preference by denotation", multiset_preference),
        ("place-model pipeline on rows 1-3", place_pipeline),
        ("switch heuristic", switch_heuristic),
        ("total correctness at N=4 M=6", desk_correctness),
        ("propagation matches brute force", oracle_equivalence),
        ("opening informativeness", informativeness),
        ("CLI determinism", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(check).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match result {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
