//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::error::Error as StdError;
use std::time::Instant;

use definetti_core::chains::{self, CopointedObject, DDChain};
use definetti_core::matrix::Matrix;
use definetti_core::moments::{self, Totality};
use definetti_core::multiset::{multinomial, multiset_of, Alphabet, Multiset, MultisetBasis, TupleIndex};
use definetti_core::optim::{self, LinearProgram, LpSolution, LpStatus, Mode, Sense};
use definetti_core::pcoh::{self, PcsVector};
use definetti_core::rational::{self, q, qi, Q};
use definetti_core::stoch::{self, AtomicMeasure, ProbVector};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use common::{dual_vertices, oracle_inside, rand_q, rand_simplex};

type Outcome = Result<(bool, String), Box<dyn StdError>>;

fn alphabet(k: usize) -> Alphabet {
    if k == 2 {
        Alphabet::bool()
    } else {
        Alphabet::letters(k)
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    stoch::trial_rng(20_240_601, stream)
}

fn rand_stochastic(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_rows((0..rows).map(|_| rand_simplex(rng, cols, 6)).collect()).expect("rectangular")
}

fn worst_of(reports: &[definetti_core::report::CheckReport]) -> f64 {
    reports.iter().map(|r| r.deviation.as_f64()).fold(0.0, f64::max)
}

fn chain(obj: &CopointedObject, n: usize) -> Result<DDChain, Box<dyn StdError>> {
    Ok(chains::build_dd_chain(obj, n)?)
}

/// Squares of every chain and of lifted chain morphisms, k ≤ 3, N ≤ 4.
fn chain_square_law() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(1);
    let mut worst = 0.0f64;
    let mut squares = 0;
    for k in 1..=3 {
        let a = alphabet(k);
        let objs = [
            CopointedObject::stoch_free(&a),
            CopointedObject::pcoh_definetti(&a),
            CopointedObject::pcoh_free(&pcoh::ground_pcs(&a)),
        ];
        for n in 0..=4 {
            for obj in &objs {
                let r = chain(obj, n)?.verify_squares()?;
                squares += r.len();
                worst = worst.max(worst_of(&r));
            }
        }
        for k2 in 1..=3 {
            let b = alphabet(k2);
            let alpha = rand_stochastic(&mut rng, k, k2);
            let pairs = [
                (CopointedObject::stoch_free(&a), CopointedObject::stoch_free(&b), alpha.clone()),
                (CopointedObject::pcoh_definetti(&a), CopointedObject::pcoh_definetti(&b), alpha.clone()),
            ];
            for (o1, o2, alpha) in pairs {
                let (c1, c2) = (chain(&o1, 4)?, chain(&o2, 4)?);
                let m = chains::lift_copointed_morphism(&alpha, &c1, &c2)?;
                let r = chains::verify_chain_morphism(&m, &c1, &c2)?;
                squares += r.len();
                worst = worst.max(worst_of(&r));
            }
            // β ⊕ 1 between free objects keeps the unit point
            let mut lifted = Matrix::zeros(k + 1, k2 + 1);
            for i in 0..k {
                for j in 0..k2 {
                    lifted[(i, j)] = alpha[(i, j)].clone();
                }
            }
            lifted[(k, k2)] = Q::one();
            let c1 = chain(&CopointedObject::pcoh_free(&pcoh::ground_pcs(&a)), 4)?;
            let c2 = chain(&CopointedObject::pcoh_free(&pcoh::ground_pcs(&b)), 4)?;
            let m = chains::lift_copointed_morphism(&lifted, &c1, &c2)?;
            let r = chains::verify_chain_morphism(&m, &c1, &c2)?;
            squares += r.len();
            worst = worst.max(worst_of(&r));
        }
        let c1 = chain(&CopointedObject::pcoh_definetti(&a), 4)?;
        let c2 = chain(&CopointedObject::pcoh_free(&pcoh::ground_pcs(&a)), 4)?;
        let m = chains::lift_copointed_morphism(&chains::unit_pairing(c1.object()), &c1, &c2)?;
        let r = chains::verify_chain_morphism(&m, &c1, &c2)?;
        squares += r.len();
        worst = worst.max(worst_of(&r));
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((worst == 0.0 && secs < 10.0, format!("{squares} squares, worst deviation {worst}, {secs:.2} s (limit 10 s)")))
}

/// `(μ, ν) ↦ multinomial(μ − ν)` computed from scratch.
fn multinomial_oracle(k: usize, n: usize) -> Matrix {
    let rows = MultisetBasis::exact(k, n);
    let cols = MultisetBasis::bounded(k, n);
    let mut m = Matrix::zeros(rows.len(), cols.len());
    for (i, mu) in rows.items().iter().enumerate() {
        for (j, nu) in cols.items().iter().enumerate() {
            if nu.is_subset_of(mu) {
                let rest: Vec<u64> = mu.counts().iter().zip(nu.counts()).map(|(a, b)| (a - b) as u64).collect();
                let total: u64 = rest.iter().sum();
                let fact = |x: u64| (1..=x).product::<u64>();
                let val = fact(total) / rest.iter().map(|&x| fact(x)).product::<u64>();
                m[(i, j)] = qi(val as i64);
            }
        }
    }
    m
}

fn multinomial_chain_morphism() -> Outcome {
    let mut worst = Q::zero();
    let mut entries = 0;
    for k in 1..=3 {
        let a = alphabet(k);
        let c1 = chain(&CopointedObject::pcoh_definetti(&a), 4)?;
        let c2 = chain(&CopointedObject::pcoh_free(&pcoh::ground_pcs(&a)), 4)?;
        let solved = chains::lift_copointed_morphism(&chains::unit_pairing(c1.object()), &c1, &c2)?;
        for n in 0..=4 {
            let closed = pcoh::mn_alpha(&a, n);
            worst = worst.max(solved.components[n].max_abs_diff(closed.matrix())?);
            worst = worst.max(multinomial_oracle(k, n).max_abs_diff(closed.matrix())?);
            entries += closed.matrix().entries().len();
        }
    }
    Ok((worst.is_zero(), format!("{entries} entries compared, worst deviation {}", rational::format(&worst))))
}

/// Symmetrisation average from tuple multisets, without permutations.
fn symmetrizer_oracle(k: usize, n: usize) -> Matrix {
    let size = k.pow(n as u32);
    let ms: Vec<Multiset> = (0..size).map(|r| multiset_of(&TupleIndex::unrank(r, k, n), k).unwrap()).collect();
    let mut m = Matrix::zeros(size, size);
    for a in 0..size {
        let w = Q::new(1.into(), multinomial(&ms[a]).into());
        for b in 0..size {
            if ms[a] == ms[b] {
                m[(a, b)] = w.clone();
            }
        }
    }
    m
}

fn equaliser_laws() -> Outcome {
    let mut worst = Q::zero();
    let mut cases = 0;
    for k in 1..=3 {
        let a = alphabet(k);
        for n in 0..=5 {
            let eq = stoch::eq_n_stoch(&a, n);
            let coeq = stoch::coeq_n_stoch(&a, n);
            worst = worst.max(stoch::check_symmetric(eq.matrix(), k, n)?.max_deviation);
            worst = worst.max(stoch::check_symmetric(&pcoh::eq_matrix(k, n), k, n)?.max_deviation);
            let id = Matrix::identity(MultisetBasis::exact(k, n).len());
            worst = worst.max(eq.matrix().then(coeq.matrix())?.max_abs_diff(&id)?);
            let avg = coeq.matrix().then(eq.matrix())?;
            worst = worst.max(avg.max_abs_diff(&symmetrizer_oracle(k, n))?);
            worst = worst.max(avg.max_abs_diff(&stoch::symmetrizer(k, n))?);
            cases += 1;
        }
    }
    Ok((worst.is_zero(), format!("{cases} (k, n) cases, worst deviation {}", rational::format(&worst))))
}

fn cone_equivalence() -> Outcome {
    let mut worst = Q::zero();
    let mut cones = [0usize; 2];
    for (slot, param) in [(0, 1), (1, 2)] {
        let mut rng = rng(4 + param as u64);
        for i in 0..100 {
            let k = 1 + i % 3;
            let depth = i % 5;
            let a = alphabet(k);
            let obj = match (i / 3) % 3 {
                0 => CopointedObject::stoch_free(&a),
                1 => CopointedObject::pcoh_definetti(&a),
                _ => CopointedObject::pcoh_free(&pcoh::ground_pcs(&a)),
            };
            let c = chain(&obj, depth)?;
            let apex = rng.gen_range(1..=2);
            let dd = chains::random_dd_cone(&c, apex, param, &mut rng)?;
            let del = chains::random_delete_cone(&c, apex, param, &mut rng)?;
            worst = worst.max(c.cone_deviation(&dd)?.0);
            worst = worst.max(c.cone_deviation(&del)?.0);
            worst = worst.max(chains::round_trip_deviation(&c, &dd, &del)?);
            cones[slot] += 1;
        }
    }
    Ok((
        worst.is_zero(),
        format!("{} plain and {} Y=Bool cone pairs, worst round-trip deviation {}", cones[0], cones[1], rational::format(&worst)),
    ))
}

fn multkern_cone() -> Outcome {
    let mut rng = rng(5);
    let mut worst = Q::zero();
    let mut checks = 0;
    for k in 1..=3 {
        let a = alphabet(k);
        for _ in 0..5 {
            let r = ProbVector::proper(rand_simplex(&mut rng, k, 12))?;
            for n in 0..=5 {
                let top = Matrix::row_vector(stoch::multkern(&r, n + 1)?);
                let down = top.then(stoch::dd_definetti_stoch(&a, n).matrix())?;
                let oracle: Vec<Q> = MultisetBasis::exact(k, n)
                    .items()
                    .iter()
                    .map(|mu| {
                        let p: Q = r.weights().iter().zip(mu.counts()).map(|(w, &c)| num_traits::pow(w.clone(), c as usize)).product();
                        Q::from_integer(multinomial(mu).into()) * p
                    })
                    .collect();
                worst = worst.max(down.max_abs_diff(&Matrix::row_vector(oracle))?);
                checks += 1;
            }
        }
    }
    Ok((worst.is_zero(), format!("{checks} (r, n) cases, worst deviation {}", rational::format(&worst))))
}

fn random_mixing(rng: &mut ChaCha8Rng, k: usize, atoms: usize, den: i64) -> Result<AtomicMeasure, Box<dyn StdError>> {
    let weights = rand_simplex(rng, atoms, 12);
    let pairs = weights.into_iter().map(|w| (rand_simplex(rng, k, den), w)).collect();
    let mut m = AtomicMeasure::from_pairs(pairs)?;
    m.alphabet = Some(alphabet(k));
    Ok(m)
}

fn iota_diagram() -> Outcome {
    let mut rng = rng(6);
    let mut worst = 0.0f64;
    let mut mixings = 0;
    for k in 1..=3 {
        for atoms in 1..=3 {
            for _ in 0..3 {
                let m = random_mixing(&mut rng, k, atoms, 10)?;
                worst = worst.max(worst_of(&moments::verify_iota_cone(&m, 4)?));
                mixings += 1;
            }
        }
    }
    Ok((worst == 0.0, format!("{mixings} mixings, levels 0..=4, worst deviation {worst}")))
}

fn totality() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(7);
    // (a) images of probability mixings are exactly total
    let mut a_ok = true;
    for k in 1..=3 {
        for atoms in 1..=3 {
            let m = random_mixing(&mut rng, k, atoms, 9)?;
            a_ok &= moments::check_total(&moments::iota(&m, 6)?, 0.0) == Totality::Total { defect: Q::zero() };
        }
    }
    // (b) damping by p = 1/2 leaves defect (1 − p)·u'_μ, largest at []
    let p = q(1, 2);
    let u = moments::iota(&AtomicMeasure::dirac(ProbVector::proper(vec![q(1, 2), q(1, 2)])?), 4)?;
    let damped = moments::BangElement::from_fn(Alphabet::bool(), 4, |mu| num_traits::pow(p.clone(), mu.size() as usize) * u.get(mu))?;
    let b_ok = match moments::check_total(&damped, 1e-9) {
        Totality::NonTotal { witness, defect, .. } => {
            witness == Multiset::empty(2) && defect == (Q::one() - &p) * damped.get(&witness)
        }
        Totality::Total { .. } => false,
    };
    // (c) grid-64 recovery at depth 6
    let mut worst = 0.0f64;
    let mut recovered = 0;
    for (k, den) in [(2, 64), (2, 32), (2, 8), (3, 16), (3, 64)] {
        for atoms in 1..=3 {
            let m = random_mixing(&mut rng, k, atoms, den)?;
            let b = moments::iota(&m, 6)?;
            let rec = moments::recover_measure(&b, 64, 1e-6, Mode::Float)?;
            let again = moments::iota(&rec.measure, 6)?;
            let drift = b.coeffs().iter().zip(again.coeffs()).map(|(x, y)| rational::to_f64(&(x - y))).fold(0.0, |m: f64, d| m.max(d.abs()));
            worst = worst.max(rec.residual).max(drift);
            recovered += 1;
        }
    }
    let c_ok = worst <= 1e-6;
    let secs = start.elapsed().as_secs_f64();
    Ok((
        a_ok && b_ok && c_ok && secs < 30.0,
        format!(
            "(a) {} (b) {} (c) {recovered} recoveries, worst residual {worst:e}; {secs:.2} s (limit 30 s)",
            if a_ok { "defect 0" } else { "FAILED" },
            if b_ok { "damped defect 1/2 at []" } else { "FAILED" },
        ),
    ))
}

fn monte_carlo() -> Outcome {
    let m = AtomicMeasure::from_pairs(vec![(vec![q(3, 10), q(7, 10)], q(1, 2)), (vec![q(4, 5), q(1, 5)], q(1, 2))])?;
    let law = stoch::empirical_law(&m, 1000, 10_000, 42)?;
    let mut worst = 0.0f64;
    for a in 1..=3u32 {
        let mu = Multiset::new(vec![a, 0]);
        worst = worst.max((law.moment(&mu) - rational::to_f64(&m.moment(&mu))).abs());
    }
    Ok((worst <= 0.02, format!("prefix 1000, 10^4 trials, worst error of first three moments {worst:.5} (limit 0.02)")))
}

fn random_lp(rng: &mut ChaCha8Rng) -> LinearProgram {
    let n = rng.gen_range(2..=20);
    let m = rng.gen_range(1..=12);
    let mut lp = LinearProgram::new((0..n).map(|_| qi(rng.gen_range(-3..=6))).collect());
    for _ in 0..m {
        let row = (0..n).map(|_| qi(rng.gen_range(-1..=5))).collect();
        let sense = match rng.gen_range(0..6) {
            0 => Sense::Ge,
            1 => Sense::Eq,
            _ => Sense::Le,
        };
        lp.constrain(row, sense, q(rng.gen_range(0..=20), rng.gen_range(1..=4)));
    }
    lp.le(vec![Q::one(); n], qi(rng.gen_range(1..=10)));
    lp
}

fn lp_oracle() -> Outcome {
    let mut rng = rng(9);
    let mut disagreement = 0.0f64;
    let mut exact_gap = Q::zero();
    let mut float_gap = 0.0f64;
    let mut statuses_agree = true;
    let mut solves = 0;
    let mut track = |e: &LpSolution<Q>, f: &LpSolution<f64>| {
        if e.status == LpStatus::Optimal {
            exact_gap = exact_gap.clone().max(e.duality_gap.clone()).max(e.dual_infeasibility.clone()).max(e.primal_infeasibility.clone());
        }
        if f.status == LpStatus::Optimal {
            float_gap = float_gap.max(f.duality_gap);
        }
        statuses_agree &= e.status == f.status;
        if e.status == LpStatus::Optimal && f.status == LpStatus::Optimal {
            disagreement = disagreement.max((rational::to_f64(&e.value) - f.value).abs());
        }
        solves += 2;
    };
    for _ in 0..50 {
        let lp = random_lp(&mut rng);
        track(&optim::solve::<Q>(&lp)?, &optim::solve::<f64>(&lp)?);
    }
    // the recovery programs of the moment suite
    let mut mrng = self::rng(10);
    for (k, grid) in [(2, 8), (2, 16), (3, 6)] {
        let m = random_mixing(&mut mrng, k, 2, grid as i64)?;
        let b = moments::iota(&m, 4)?;
        let points = moments::simplex_grid(k, grid);
        let design: Vec<Vec<Q>> = b
            .basis()
            .items()
            .iter()
            .map(|mu| points.iter().map(|r| r.iter().zip(mu.counts()).map(|(x, &c)| num_traits::pow(x.clone(), c as usize)).product()).collect())
            .collect();
        track(&optim::feasibility_minmax::<Q>(&design, b.coeffs())?, &optim::feasibility_minmax::<f64>(&design, b.coeffs())?);
    }
    let ok = statuses_agree && exact_gap.is_zero() && float_gap <= 1e-8 && disagreement <= 1e-7;
    Ok((
        ok,
        format!(
            "{solves} solves; exact certificate defect {}, float gap {float_gap:e} (limit 1e-8), exact/float disagreement {disagreement:e} (limit 1e-7)",
            rational::format(&exact_gap)
        ),
    ))
}

fn biorthogonality() -> Outcome {
    let mut rng = rng(11);
    let bool_pcs = pcoh::ground_pcs(&Alphabet::bool());
    let spaces = [("Bool", bool_pcs.clone(), 12), ("Bool⊗Bool", pcoh::tensor_pcs(&bool_pcs, &bool_pcs), 24)];
    let mut mismatches = 0;
    let mut inside = 0;
    let mut total = 0;
    for (_, pcs, den) in &spaces {
        let gens: Vec<Vec<Q>> = pcs.generators().iter().map(|g| g.coeffs().to_vec()).collect();
        let vertices = dual_vertices(&gens, pcs.dim());
        for _ in 0..200 {
            let x: Vec<Q> = (0..pcs.dim()).map(|_| rand_q(&mut rng, 12, *den)).collect();
            let expect = oracle_inside(&vertices, &x);
            let v = PcsVector::new(x)?;
            for mode in [Mode::Exact, Mode::Float] {
                if pcs.contains(&v, mode)?.is_inside() != expect {
                    mismatches += 1;
                }
            }
            inside += usize::from(expect);
            total += 1;
        }
    }
    Ok((mismatches == 0, format!("{total} vectors ({inside} inside), {mismatches} disagreements with vertex enumeration")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("chain-square law", chain_square_law),
        ("multinomial chain morphism", multinomial_chain_morphism),
        ("equaliser laws", equaliser_laws),
        ("two-formulation equivalence", cone_equivalence),
        ("De Finetti limit cone", multkern_cone),
        ("iota diagram", iota_diagram),
        ("totality characterisation", totality),
        ("Monte Carlo De Finetti", monte_carlo),
        ("LP oracle", lp_oracle),
        ("biorthogonality", biorthogonality),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (ok, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
        failed += usize::from(!ok);
        println!("[{}] {:>2} {name}: {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
