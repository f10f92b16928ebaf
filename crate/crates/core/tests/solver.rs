use mastermind_core::analysis::{tournament, TournamentMode, DEFAULT_BUDGET};
use mastermind_core::reasoner::{color_hypotheses, TraceKind};
use mastermind_core::{
    score, solve_secret, CodeSpace, Comparator, Feedback, GameConfig, HybridSolver, Model, SolveError, Strategy,
};

fn desk() -> GameConfig {
    GameConfig::new(4, 6).unwrap()
}

#[test]
fn hybrid_solves_every_desk_secret() {
    let config = desk();
    let space = CodeSpace::new(&config);
    for comparator in [Comparator::Heuristic, Comparator::CountBased] {
        for secret in space.codes() {
            let game = solve_secret(Strategy::Hybrid(comparator), secret, &config, &space)
                .unwrap_or_else(|e| panic!("{}: {e}", config.format_code(secret)));
            assert_eq!(game.transcript.entries.last().unwrap().guess, *secret);
            assert!(game.transcript.verify().unwrap().iter().all(|r| r.passed()));
        }
    }
}

#[test]
fn filter_wins_within_candidate_count() {
    let config = desk();
    let t = tournament(Strategy::Filter, &config, TournamentMode::Exhaustive, DEFAULT_BUDGET).unwrap();
    assert_eq!((t.games, t.solved), (1296, 1296));
    assert!(t.max <= 1296);
}

#[test]
fn interpretation_is_complete() {
    // For every (guess, secret) the true attribution is among the models and
    // the secret satisfies it.
    let config = desk();
    let space = CodeSpace::new(&config);
    for g in space.codes() {
        for s in space.codes() {
            let f = score(g, s);
            let hyps = color_hypotheses(g, f, &config, 0).unwrap();
            let truth = hyps.iter().find(|h| {
                let m = match &h.model {
                    Model::Color(m) => m,
                    Model::Place(_) => unreachable!(),
                };
                g.distinct_colors().iter().all(|&c| {
                    let k = g.count(c).min(s.count(c)) as u8;
                    m.get(c).lower() == k
                })
            });
            let truth = truth.unwrap_or_else(|| panic!("{} vs {}", config.format_code(g), config.format_code(s)));
            assert!(truth.model.admits(s));
        }
    }
}

#[test]
fn reference_secret_trace_shows_reasoning() {
    let config = GameConfig::default();
    let space = CodeSpace::new(&config);
    let secret = config.parse_code("R R G Y G").unwrap();
    let mut breaker = HybridSolver::new(&config, Comparator::Heuristic, &space).traced();
    let game = mastermind_core::solve(&mut breaker, |g| score(g, &secret), &config).unwrap();
    assert_eq!(game.transcript.secret.as_ref(), Some(&secret));
    for e in &game.trace {
        println!("{e}");
    }
    println!("{}", game.transcript.format(&config));
    assert!(game.trace.iter().any(|e| e.kind == TraceKind::Propagate));
}

#[test]
fn contradictory_feedback_is_reported() {
    let config = desk();
    let space = CodeSpace::new(&config);
    let mut solver = HybridSolver::new(&config, Comparator::Heuristic, &space);
    use mastermind_core::Codebreaker;
    let g = solver.next_guess().unwrap();
    solver.observe(&g, Feedback::new(0, 0)).unwrap();
    let err = solver.observe(&g, Feedback::new(1, 0)).unwrap_err();
    assert!(matches!(err, SolveError::InconsistentHistory(_)));
}

#[test]
fn identical_inputs_give_identical_transcripts() {
    let config = GameConfig::default();
    let space = CodeSpace::new(&config);
    let secret = config.parse_code("G O P C M").unwrap();
    let a = solve_secret(Strategy::Hybrid(Comparator::CountBased), &secret, &config, &space).unwrap();
    let b = solve_secret(Strategy::Hybrid(Comparator::CountBased), &secret, &config, &space).unwrap();
    assert_eq!(a.transcript.format(&config), b.transcript.format(&config));
}
