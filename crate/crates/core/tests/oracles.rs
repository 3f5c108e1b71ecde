//! Cross-checks against independent brute-force routes.

use mermin_core::classical::{
    classical_bound, exhaustive_best, is_balanced, optimal_re, optimal_set, table1_strategy,
    GaussianInt, ProbabilisticStrategy, Strategy,
};
use mermin_core::game::{enumerate_legitimate, is_appropriate, GameConfig, Question};
use mermin_core::noise::{
    bitflip_threshold, bitflip_win_prob, detection_threshold, detection_win_prob,
    errorfree_classical_bound, errorfree_exhaustive, errorfree_reference_strategy,
    rational_to_f64, BitFlipModel, DetectionModel, ExtendedStrategy, RoundOutcome,
};
use mermin_core::quantum::{apply_inputs_analytic, prepare_dense};
use mermin_core::{Limits, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg(n: usize) -> GameConfig {
    GameConfig::new(n).unwrap()
}

/// Σ over all 2^n strings of i^Δ(x) Π S_{i,x_i}.
fn score_by_expansion(s: &Strategy) -> GaussianInt {
    let n = s.n();
    (0..1u64 << n)
        .map(|x| {
            let q = Question::new(n, x).unwrap();
            let prod: i64 = (0..n).map(|i| s.sign(i, q.bit(i))).product();
            let phase = GaussianInt::i_pow(q.hamming_weight());
            GaussianInt::new(phase.re * prod, phase.im * prod)
        })
        .fold(GaussianInt::default(), |a, b| a + b)
}

/// Wins counted by enumerating all 2^n strings and calling the public
/// winning condition.
fn wins_by_enumeration(s: &Strategy) -> u64 {
    let n = s.n();
    (0..1u64 << n)
        .map(|x| Question::new(n, x).unwrap())
        .filter(|q| q.is_legitimate())
        .filter(|q| is_appropriate(q, &s.eval_answer(q).unwrap()).unwrap())
        .count() as u64
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Probability of an even number of flips.
fn even_error_sum(n: usize, p: f64) -> f64 {
    (0..=n as u64)
        .step_by(2)
        .map(|i| binomial(n as u64, i) * p.powi((n as u64 - i) as i32) * (1.0 - p).powi(i as i32))
        .sum()
}

fn random_strategy(rng: &mut ChaCha8Rng, n: usize) -> Strategy {
    Strategy::from_code(n, rng.random::<u64>() & ((1u64 << (2 * n)) - 1)).unwrap()
}

#[test]
fn product_equals_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 3..=10 {
        for _ in 0..200 {
            let s = random_strategy(&mut rng, n);
            assert_eq!(s.score_product(), score_by_expansion(&s), "{s}");
        }
    }
}

#[test]
fn score_identity_exhaustive_small() {
    for n in 3..=6 {
        for s in Strategy::all(cfg(n)).unwrap() {
            let score = s.score().unwrap();
            assert_eq!(score.wins + score.losses, 1 << (n - 1));
            assert!(score.s.re.abs() <= optimal_re(n));
            assert_eq!(score.wins, wins_by_enumeration(&s));
        }
    }
}

#[test]
fn score_identity_randomized_large() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 7..=16 {
        for _ in 0..20 {
            let s = random_strategy(&mut rng, n);
            let score = s.score().unwrap();
            assert_eq!(score.s.re, score.wins as i64 - score.losses as i64);
            assert!(score.s.re.abs() <= optimal_re(n));
        }
    }
}

#[test]
fn exhaustive_matches_enumeration_oracle() {
    for n in 3..=5 {
        let oracle_max = Strategy::all(cfg(n))
            .unwrap()
            .map(|s| wins_by_enumeration(&s))
            .max()
            .unwrap();
        let best = exhaustive_best(cfg(n), &Limits::default()).unwrap();
        assert_eq!(best.max_wins, oracle_max);
        assert_eq!(best.proportion, classical_bound(n));
        let oracle_witnesses = Strategy::all(cfg(n))
            .unwrap()
            .filter(|s| wins_by_enumeration(s) == oracle_max)
            .count();
        assert_eq!(best.witnesses.len(), oracle_witnesses);
    }
}

#[test]
fn exhaustive_bound_through_seven() {
    let expected = [(3, (3, 4)), (4, (3, 4)), (5, (5, 8)), (6, (5, 8)), (7, (9, 16))];
    for (n, (a, b)) in expected {
        let best = exhaustive_best(cfg(n), &Limits::default()).unwrap();
        assert_eq!(best.proportion, Rational::new(a, b), "n = {n}");
        // optimal ⇔ Re(s) = 2^⌊n/2⌋
        assert!(best.witnesses.iter().all(|s| s.is_optimal()));
    }
}

#[test]
fn table1_optimal_through_sixteen() {
    for n in 3..=16 {
        let s = table1_strategy(cfg(n)).unwrap();
        assert_eq!(s.success_proportion(), classical_bound(n), "n = {n}");
        assert!(s.is_optimal());
    }
}

#[test]
fn optimal_sets_balanced_and_flip_closed() {
    for n in 3..=5 {
        let set = optimal_set(cfg(n), &Limits::default()).unwrap();
        assert!(!set.is_empty());
        assert!(set.contains(&table1_strategy(cfg(n)).unwrap()));
        assert!(set.iter().all(|s| s.success_proportion() == classical_bound(n)));
        assert!(is_balanced(&set, cfg(n)).unwrap());
        for s in &set {
            assert!(set.binary_search(&s.pair_flip_map().unwrap()).is_ok());
        }
        let mix = ProbabilisticStrategy::uniform(set).unwrap();
        assert_eq!(mix.success_probability(), classical_bound(n));
    }
}

#[test]
fn relabeled_pair_flip_moves_winners() {
    // bijection on players a, b carries winners on x (x_a = x_b = 0) to
    // winners on x with both bits set
    let n = 5;
    for s in Strategy::all(cfg(n)).unwrap().step_by(7) {
        for (a, b) in [(0, 2), (1, 4), (3, 2)] {
            let f = s.pair_flip_map_at(a, b).unwrap();
            assert_eq!(f.score_product(), s.score_product());
            for q in enumerate_legitimate(cfg(n)) {
                if q.bit(a) == 0 && q.bit(b) == 0 {
                    let set = (1u64 << (n - 1 - a)) | (1u64 << (n - 1 - b));
                    let q2 = Question::new(n, q.bits() | set).unwrap();
                    assert_eq!(s.wins(&q).unwrap(), f.wins(&q2).unwrap());
                }
            }
        }
    }
}

#[test]
fn random_mixtures_respect_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let n = 3;
    let bound = classical_bound(n);
    for _ in 0..2_000 {
        let k = rng.random_range(1..=8);
        let support: Vec<Strategy> = (0..k).map(|_| random_strategy(&mut rng, n)).collect();
        let raw: Vec<i128> = (0..k).map(|_| rng.random_range(0..100)).collect();
        let total: i128 = raw.iter().sum::<i128>().max(1);
        let mut weights: Vec<Rational> = raw.iter().map(|&w| Rational::new(w, total)).collect();
        if raw.iter().all(|&w| w == 0) {
            weights[0] = Rational::from_integer(1);
        }
        let ps = ProbabilisticStrategy::new(support, weights).unwrap();
        let prob = ps.success_probability();
        assert!(prob <= bound);
        assert!(prob <= ps.success_proportion());
    }
}

#[test]
fn dense_oracle_matches_analytic_sign() {
    for n in 3..=12 {
        for q in enumerate_legitimate(cfg(n)) {
            let state = prepare_dense(&q, 20).unwrap();
            assert!((state.norm_sqr() - 1.0).abs() <= 1e-12);
            let sign = apply_inputs_analytic(&q).unwrap();
            assert_eq!(state.parity_class(), Some(sign.answer_parity()), "q = {q}");
        }
    }
}

#[test]
fn bitflip_closed_form_matches_binomial() {
    for n in 1..=30 {
        for k in 50..=100 {
            let p = k as f64 / 100.0;
            let closed = bitflip_win_prob(n, &BitFlipModel::new(p).unwrap());
            let oracle = even_error_sum(n, p);
            assert!((closed - oracle).abs() <= 1e-12, "n={n} p={p}");
        }
    }
}

#[test]
fn bitflip_threshold_separates() {
    // the boundary itself is irrational, so grid points never land on it
    for n in 3..=30 {
        let thr = bitflip_threshold(n);
        let classical = rational_to_f64(&classical_bound(n));
        for k in 500..=1000 {
            let p = k as f64 / 1000.0;
            let q = bitflip_win_prob(n, &BitFlipModel::new(p).unwrap());
            assert_eq!(p > thr, q > classical, "n={n} p={p} thr={thr}");
        }
    }
}

#[test]
fn odd_thresholds_match_printed_formula() {
    for n in (3..=41).step_by(2) {
        let printed = 0.5 + 2f64.sqrt().powf(1.0 + 1.0 / n as f64) / 4.0;
        assert!((bitflip_threshold(n) - printed).abs() < 1e-15);
    }
}

#[test]
fn thresholds_decrease_within_parity_class() {
    for n in 3..200 {
        assert!(bitflip_threshold(n + 2) < bitflip_threshold(n));
        assert!(bitflip_threshold(n) > 0.5 + 2f64.sqrt() / 4.0);
        assert!(detection_threshold(n + 1) < detection_threshold(n));
        assert!(detection_threshold(n) > 0.5);
    }
}

#[test]
fn detection_grid_separates() {
    for n in 3..=20 {
        let thr = detection_threshold(n);
        let classical = 2.0 / 2f64.powi(n as i32 - 1);
        for k in 0..=100 {
            let eta = k as f64 / 100.0;
            let q = detection_win_prob(n, &DetectionModel::new(eta).unwrap());
            assert_eq!(q > classical, eta > thr, "n={n} eta={eta}");
        }
    }
}

#[test]
fn reference_strategy_winning_set() {
    for n in 3..=16 {
        let c = cfg(n);
        let s = errorfree_reference_strategy(c).unwrap();
        let zero = Question::new(n, 0).unwrap();
        let pair = Question::new(n, 0b11 << (n - 2)).unwrap();
        assert_eq!(s.winning_questions(), vec![zero, pair]);
        assert!(s.is_error_free());
    }
    // beyond the direct range: targeted evaluation
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for n in 17..=24 {
        let c = cfg(n);
        let s = errorfree_reference_strategy(c).unwrap();
        let zero = Question::new(n, 0).unwrap();
        let pair = Question::new(n, 0b11 << (n - 2)).unwrap();
        assert_eq!(s.outcome(&zero).unwrap(), RoundOutcome::Win);
        assert_eq!(s.outcome(&pair).unwrap(), RoundOutcome::Win);
        for _ in 0..2_000 {
            let bits = rng.random::<u64>() & ((1 << n) - 1);
            let q = Question::new(n, bits).unwrap();
            if !q.is_legitimate() || q == zero || q == pair {
                continue;
            }
            assert_eq!(s.outcome(&q).unwrap(), RoundOutcome::Draw, "{q}");
        }
    }
}

/// Win/loss tally through the public answer and winning condition.
fn extended_tally(s: &ExtendedStrategy) -> (u64, u64) {
    let mut wins = 0;
    let mut losses = 0;
    for q in enumerate_legitimate(cfg(s.n())) {
        let a = s.answer(&q).unwrap();
        if a.has_bottom() {
            continue;
        }
        if is_appropriate(&q, &a).unwrap() {
            wins += 1;
        } else {
            losses += 1;
        }
    }
    (wins, losses)
}

#[test]
fn errorfree_sweep_matches_direct_tally() {
    for n in 3..=4 {
        let sweep = errorfree_exhaustive(cfg(n), &Limits::default()).unwrap();
        let mut error_free = 0;
        let mut best = 0;
        for idx in 0..9u64.pow(n as u32) {
            let s = ExtendedStrategy::from_index(cfg(n), idx).unwrap();
            let (wins, losses) = extended_tally(&s);
            assert_eq!(s.is_error_free(), losses == 0);
            if losses == 0 {
                error_free += 1;
                best = best.max(wins);
            }
        }
        assert_eq!(sweep.error_free_tables, error_free);
        assert_eq!(sweep.max_wins, best);
        assert_eq!(best, 2);
    }
}

#[test]
fn errorfree_mixtures_stay_below_bound() {
    // mixing error-free tables keeps every round error-free, and the mean
    // over questions is a convex combination of per-table proportions
    let n = 3;
    let c = cfg(n);
    let tables: Vec<ExtendedStrategy> = (0..9u64.pow(n as u32))
        .map(|i| ExtendedStrategy::from_index(c, i).unwrap())
        .filter(|s| s.is_error_free())
        .collect();
    let qs = enumerate_legitimate(c);
    let bound = rational_to_f64(&errorfree_classical_bound(n));
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..2_000 {
        let k = rng.random_range(1..=6);
        let picks: Vec<&ExtendedStrategy> = (0..k).map(|_| &tables[rng.random_range(0..tables.len())]).collect();
        let weights: Vec<f64> = (0..k).map(|_| rng.random_range(1..=20) as f64).collect();
        let total: f64 = weights.iter().sum();
        let per_question: Vec<f64> = qs
            .iter()
            .map(|q| {
                picks
                    .iter()
                    .zip(&weights)
                    .filter(|(s, _)| s.outcome(q).unwrap() == RoundOutcome::Win)
                    .map(|(_, w)| w / total)
                    .sum()
            })
            .collect();
        let mean = per_question.iter().sum::<f64>() / qs.len() as f64;
        let worst = per_question.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(mean <= bound + 1e-12, "mean {mean}");
        assert!(worst <= mean + 1e-12);
    }
}
