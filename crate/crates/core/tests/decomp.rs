use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strichartz_lab::decomp::*;
use strichartz_lab::exponents::DispersionSetup;
use strichartz_lab::spectral::*;

fn random_field(grid: Grid, rng: &mut ChaCha8Rng) -> Field {
    let data = (0..grid.len())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    Field::new(grid, data).unwrap()
}

fn random_slab(grid: Grid, count: usize, dt: f64, rng: &mut ChaCha8Rng) -> TimeSlab {
    TimeSlab::new(0.0, dt, (0..count).map(|_| random_field(grid, rng)).collect()).unwrap()
}

fn pairs(squares: &[WhitneySquare]) -> Vec<(usize, usize, usize)> {
    squares.iter().map(|q| (q.i.level as usize, q.i.index, q.j.index)).collect()
}

#[test]
fn whitney_small_cases() {
    let one = whitney_decompose(1.0, 0.5, 1).unwrap();
    assert_eq!(pairs(&one), vec![(1, 0, 1)]);
    assert_eq!(one[0].scale(), 0.5);

    let two = whitney_decompose(1.0, 0.25, 2).unwrap();
    assert_eq!(pairs(&two), vec![(2, 0, 2), (2, 0, 3), (2, 1, 3), (2, 0, 1), (2, 1, 2), (2, 2, 3)]);
    assert_eq!(two[0].i.start(), 0.0);
    assert_eq!(two[0].j.start(), 0.5);
    assert_eq!(two[1].j.end(), 1.0);

    // Coarser resolution than the lattice: squares carry several cells.
    let coarse = whitney_decompose(2.0, 0.25, 2).unwrap();
    assert!(coarse.iter().all(|q| q.cells == 2));
    assert_eq!((coarse[2].i_start(), coarse[2].j_start()), (2, 6));
}

#[test]
fn whitney_covers_triangle_exactly_once() {
    for levels in 1..=6u32 {
        let n = 1usize << levels;
        let squares = whitney_decompose(1.0, 1.0 / n as f64, levels).unwrap();
        let mut hits = vec![0u32; n * n];
        for q in &squares {
            for i in q.i_start()..q.i_start() + q.cells {
                for j in q.j_start()..q.j_start() + q.cells {
                    hits[i * n + j] += 1;
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                assert_eq!(hits[i * n + j], u32::from(i < j), "levels={levels} ({i},{j})");
            }
        }
        for q in &squares {
            let l = q.scale();
            assert_eq!(q.i.scale, q.j.scale);
            assert!(q.i.end() <= q.j.start());
            if q.is_adjacent() {
                assert_eq!(q.i.level, levels);
                assert_eq!(q.distance(), 0.0);
            } else {
                let d = q.distance() / l;
                assert!(d == 1.0 || d == 2.0, "dist {d}λ");
            }
        }
    }
}

#[test]
fn whitney_csv_and_errors() {
    let squares = whitney_decompose(1.0, 0.25, 2).unwrap();
    let mut buf = Vec::new();
    write_whitney_csv(&mut buf, &squares).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda,i_start,j_start"));
    assert_eq!(lines.next(), Some("0.25,0,2"));
    assert_eq!(text.lines().count(), 7);
    assert!(whitney_decompose(1.0, 0.1, 2).is_err());
    assert!(whitney_decompose(1.0, 0.25, 5).is_err());
}

#[test]
fn bilinear_examples() {
    let g = make_grid(2, 16, 10.0).unwrap();
    let st = DispersionSetup::new(2.0, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = random_slab(g, 8, 0.1, &mut rng);
    let zero = TimeSlab::new(0.0, 0.1, vec![Field::zeros(g); 8]).unwrap();
    assert_eq!(bilinear_b(&st, &f, &zero).unwrap(), Complex64::new(0.0, 0.0));

    let (i0, j0) = (2, 5);
    let spike = |k: usize, u: &Field| {
        let fields = (0..8).map(|i| if i == k { u.clone() } else { Field::zeros(g) }).collect();
        TimeSlab::new(0.0, 0.1, fields).unwrap()
    };
    let (u, v) = (random_field(g, &mut rng), random_field(g, &mut rng));
    let b = bilinear_b(&st, &spike(i0, &u), &spike(j0, &v)).unwrap();
    let expect = propagate(&st, -0.1 * i0 as f64, &u).inner(&propagate(&st, -0.1 * j0 as f64, &v)).unwrap() * 0.01;
    assert!((b - expect).norm() <= 1e-13 * expect.norm());
    // Reversed order lies below the diagonal.
    assert_eq!(bilinear_b(&st, &spike(j0, &u), &spike(i0, &v)).unwrap().norm(), 0.0);

    let h = random_slab(g, 8, 0.1, &mut rng);
    let pb = PulledBack::new(&st, &f, &h).unwrap();
    let swapped = PulledBack::new(&st, &h, &f).unwrap();
    let lhs = pb.b() + swapped.b().conj() + pb.diagonal();
    assert!((lhs - pb.full()).norm() <= 1e-12 * pb.full().norm());

    let other = TimeSlab::new(0.0, 0.2, h.fields().to_vec()).unwrap();
    assert_eq!(bilinear_b(&st, &f, &other).unwrap_err(), DecompError::SlabMismatch);
}

#[test]
fn whitney_sum_reproduces_b() {
    let g = make_grid(2, 32, 16.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (count, a) in [(8usize, 2.0), (16, 1.5), (32, 1.0), (64, 2.0)] {
        let st = DispersionSetup::new(a, 2).unwrap();
        let dt = 0.05;
        let f = random_slab(g, count, dt, &mut rng);
        let h = random_slab(g, count, dt, &mut rng);
        let levels = count.trailing_zeros();
        let squares = whitney_decompose(count as f64 * dt, dt, levels).unwrap();
        let b = bilinear_b(&st, &f, &h).unwrap();
        let s = whitney_sum(&st, &f, &h, &squares).unwrap();
        assert!((b - s).norm() <= 1e-12 * b.norm(), "count={count}");
        let q = squares[0];
        assert_eq!(bilinear_bq(&st, &f, &h, &q).unwrap(), PulledBack::new(&st, &f, &h).unwrap().bq(&q).unwrap());
    }
}

#[test]
fn bq_vanishes_off_support_and_checks_range() {
    let g = make_grid(1, 16, 8.0).unwrap();
    let st = DispersionSetup::new(2.0, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    // F lives on cells 0..4 only; the square ([4,6), [6,8)) misses it.
    let fields = (0..8).map(|i| if i < 4 { random_field(g, &mut rng) } else { Field::zeros(g) }).collect();
    let f = TimeSlab::new(0.0, 0.125, fields).unwrap();
    let h = random_slab(g, 8, 0.125, &mut rng);
    let squares = whitney_decompose(1.0, 0.125, 2).unwrap();
    let q = squares.iter().find(|q| q.i.index == 2 && q.j.index == 3).unwrap();
    assert_eq!(bilinear_bq(&st, &f, &h, q).unwrap().norm(), 0.0);
    let far = whitney_decompose(2.0, 0.125, 2).unwrap();
    assert!(matches!(
        bilinear_bq(&st, &f, &h, &far[1]),
        Err(DecompError::SquareOutOfRange { .. })
    ));
}

#[test]
fn frequency_localized_form() {
    let g = make_grid(2, 32, 32.0).unwrap();
    let st = DispersionSetup::new(2.0, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f = random_slab(g, 8, 0.1, &mut rng);
    let h = random_slab(g, 8, 0.1, &mut rng);
    let p = CutoffProfile;
    for n in dyadic_range(&g) {
        let pf = TimeSlab::new(0.0, 0.1, f.fields().iter().map(|u| project(n, u, &p).unwrap()).collect()).unwrap();
        assert_eq!(bilinear_bn(&st, n, &f, &h, &p).unwrap(), bilinear_b(&st, &pf, &h).unwrap());
    }
    assert!(bilinear_bn(&st, 3.0, &f, &h, &p).is_err());
}

#[test]
fn atom_examples() {
    let d = atomic_decompose(&[3.0, 0.0, 0.0], &[1.0, 0.5, 2.0], 2.0).unwrap();
    assert_eq!(d.atoms.len(), 1);
    assert_eq!((d.atoms[0].size, d.atoms[0].coefficient), (1.0, 3.0));
    assert!(d.invariant_violations(&[3.0, 0.0, 0.0]).is_empty());

    // Two levels c₁ > c₂ on [0, ½) and [½, 1), split into quarter cells.
    let (c1, c2, p) = (5.0, 2.0, 3.0);
    let values = [c2, c1, c2, c1];
    let measures = [0.25; 4];
    let d = atomic_decompose(&values, &measures, p).unwrap();
    let sizes: Vec<f64> = d.atoms.iter().map(|a| a.size).collect();
    assert_eq!(sizes, vec![0.25, 0.5, 1.0]);
    assert_eq!(d.atoms[0].support, vec![1]);
    assert_eq!(d.atoms[1].support, vec![3]);
    assert_eq!(d.atoms[2].support, vec![0, 2]);
    assert!((d.atoms[2].coefficient - c2).abs() < 1e-15);
    let ratio = d.coefficient_norm() / lp_norm(&values, &measures, p);
    assert!((0.25..=4.0).contains(&ratio), "{ratio}");
    assert!(d.invariant_violations(&values).is_empty());

    assert!(atomic_decompose(&[1.0], &[1.0], 0.5).is_err());
    assert!(atomic_decompose(&[1.0], &[0.0], 2.0).is_err());
    assert!(atomic_decompose(&[f64::NAN], &[1.0], 2.0).is_err());
}

#[test]
fn atoms_on_random_step_functions() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..100 {
        let len = rng.gen_range(1..200);
        let values: Vec<f64> = (0..len)
            .map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(-1.0..1.0f64) * rng.gen_range(0.0..4.0f64).exp() })
            .collect();
        let measures: Vec<f64> = (0..len).map(|_| rng.gen_range(0.001..0.5)).collect();
        let p = if trial % 5 == 0 { 1.0 } else { rng.gen_range(1.0..8.0) };
        let d = atomic_decompose(&values, &measures, p).unwrap();
        let bad = d.invariant_violations(&values);
        assert!(bad.is_empty(), "trial {trial}: {bad:?}");
        let norm = lp_norm(&values, &measures, p);
        if norm > 0.0 {
            let ratio = d.coefficient_norm() / norm;
            assert!((0.25..=4.0).contains(&ratio), "trial {trial}: {ratio}");
        }
        assert_eq!(atomic_decompose(&values, &measures, p).unwrap(), d);
    }
}

#[test]
fn sequence_lemma_examples() {
    let ones = vec![1.0; 4];
    let (lhs, rhs) = holder_sequence_sum(&ones, &ones, 2, 0.5, 0.5);
    assert!((lhs - 0.75).abs() < 1e-15 && (rhs - 1.0).abs() < 1e-15);
    // At λ = 1/8 nine squares each contribute 1/8: the bare product is
    // exceeded, the multiplicity bound is not.
    let ones = vec![1.0; 8];
    let (lhs, rhs) = holder_sequence_sum(&ones, &ones, 3, 0.5, 0.5);
    assert!((lhs - 9.0 / 8.0).abs() < 1e-15);
    assert!(lhs > rhs && lhs <= HOLDER_MULTIPLICITY * rhs);

    // One nonzero term each: Σ = A·B·C = product of norms.
    let s = young_sequence_sum(&[0.0, 2.0], &[3.0], &[0.0, 0.0, 5.0], 1);
    assert_eq!(s, 30.0);

    let report = verify_sequence_lemmas(1000, 7);
    assert!(report.passed(), "{report:?}");
    assert_eq!(report.holder.trials, 1000);
    assert_eq!(report.young.trials, 1000);
    assert!(report.holder.max_ratio <= 1.0 + 1e-12 && report.young.max_ratio <= 1.0 + 1e-12);
    assert_eq!(verify_sequence_lemmas(1000, 7), report);
}
