use proptest::prelude::*;
use rand::Rng;

use sicforge::construct::{adjoint_basis, gell_mann_basis};
use sicforge::group::{adjoint_matrix, haar_unitary, m_dl, ordered_product_bound, stochastic_decompose};
use sicforge::hermitian::{
    eigenvalues_hermitian, hs_inner, max_abs, reshuffle, spectrum, swap, sym_antisym_projectors,
    ComplexMatrix, HermitianOperator, OperatorBasis, Superoperator,
};
use sicforge::io::BasisFile;
use sicforge::jordan::{check_jordan_structure_lemma, jordan_rank_sides, jordan_spectrum_checked};
use sicforge::lie::{ad_spectrum, jacobi_residual, lie_structure};
use sicforge::random::{hermitian, hermitian_basis, orthonormal_basis, stream_rng, unit_vector};
use sicforge::rep::{enumerate_small_irreps, weyl_dimension, Partition};
use sicforge::sic::{frame_potential_lower_bound, orbit_frame_potential, wh_displacements, wh_orbit, Fiducial};
use sicforge::simplex::{check_trichotomy, fit_alpha_beta, gamma_from_traces, gram_engineered_basis};

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn hesse() -> OperatorBasis {
    adjoint_basis(&wh_orbit(&Fiducial::hesse_d3()), 1, 1).unwrap()
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn hs_inner_is_real(seed: u64, d in 2usize..6) {
        let mut rng = stream_rng(seed, 0);
        let z = hs_inner(&hermitian(d, &mut rng), &hermitian(d, &mut rng)).unwrap();
        prop_assert!(z.im.abs() <= 1e-12 * z.re.abs().max(1.0));
    }

    #[test]
    fn spectrum_sums_to_trace(seed: u64, d in 2usize..7) {
        let a = hermitian(d, &mut stream_rng(seed, 0));
        let s: f64 = spectrum(&a, 1e-10).eigenvalues.iter().sum();
        prop_assert!((s - a.trace()).abs() <= 1e-10 * a.norm().max(1.0));
    }

    #[test]
    fn frame_potential_never_below_bound(seed: u64, d in 2usize..7) {
        let psi = unit_vector(d, &mut stream_rng(seed, 0));
        let phi = orbit_frame_potential(&psi).unwrap();
        prop_assert!(phi - 2.0 * d as f64 / (d as f64 + 1.0) >= -1e-12);
        prop_assert!((frame_potential_lower_bound(d, 2) - 2.0 * d as f64 / (d as f64 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn wh_overlaps_depend_on_differences(seed: u64, d in 2usize..6) {
        let psi = unit_vector(d, &mut stream_rng(seed, 0));
        let ds = wh_displacements(d).unwrap();
        let states: Vec<_> = ds.iter().map(|m| m * &psi).collect();
        let overlap = |a: usize, b: usize| states[a].dotc(&states[b]).norm_sqr();
        for a in 0..d * d {
            for b in 0..d * d {
                let (p, q) = (a / d, a % d);
                let (p2, q2) = (b / d, b % d);
                let diff = ((p2 + d - p) % d) * d + (q2 + d - q) % d;
                prop_assert!((overlap(a, b) - overlap(0, diff)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn trichotomy_agrees_on_engineered_bases(seed: u64, d in 2usize..5, alpha in 0.2f64..3.0, t in 0.0f64..1.0) {
        let df = d as f64;
        let gamma = -0.5 + t * (1.0 / df + 0.5 - 0.05);
        let b = gram_engineered_basis(d, alpha, gamma, &mut stream_rng(seed, 0)).unwrap();
        let r = check_trichotomy(&b, 1e-9).unwrap();
        prop_assert!(r.pass && r.verdicts["gram"] && r.verdicts["tensor"] && r.verdicts["superoperator"]);
        let k = fit_alpha_beta(&b);
        prop_assert!((k.gamma - gamma).abs() <= 1e-10);
        if (k.alpha + df * k.beta).abs() > 1e-6 {
            prop_assert!((gamma_from_traces(d, k.alpha, &b.traces()) - k.gamma).abs() <= 1e-10);
        }
    }

    #[test]
    fn random_bases_fail_trichotomy(seed: u64, d in 2usize..5) {
        let b = hermitian_basis(d, &mut stream_rng(seed, 0));
        let r = check_trichotomy(&b, 1e-9).unwrap();
        prop_assert!(r.verdicts["agree"] && !r.verdicts["gram"]);
    }

    #[test]
    fn m_dl_upper_bound(seed: u64, d in 2usize..7) {
        let b = orthonormal_basis(d, &mut stream_rng(seed, 0));
        prop_assert!(m_dl(&b).unwrap() <= -1.0 / d as f64 + 1e-12);
    }

    #[test]
    fn ordered_product_is_permutation_minimum(v in prop::collection::vec(-5i32..6, 2..7)) {
        let lambda: Vec<f64> = v.iter().map(|&x| x as f64).collect();
        let rep = ordered_product_bound(&lambda).unwrap();
        let mut idx: Vec<usize> = (0..lambda.len()).collect();
        let mut best = f64::INFINITY;
        permute(&mut idx, 0, &mut |p| {
            let s: f64 = lambda.iter().zip(p).map(|(a, &j)| a * lambda[j]).sum();
            best = best.min(s);
        });
        prop_assert_eq!(rep.product, best);
        prop_assert!(rep.product <= rep.bound + 1e-12);
    }

    #[test]
    fn adjoint_is_a_homomorphism(seed: u64, d in 2usize..5) {
        let mut rng = stream_rng(seed, 0);
        let b = orthonormal_basis(d, &mut rng);
        let u = haar_unitary(d, &mut rng);
        let v = haar_unitary(d, &mut rng);
        let uv = adjoint_matrix(&(&u * &v), &b).unwrap().matrix;
        let prod = adjoint_matrix(&u, &b).unwrap().matrix * adjoint_matrix(&v, &b).unwrap().matrix;
        prop_assert!((uv - prod).abs().max() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn stochastic_closure_over_sic_basis(seed: u64) {
        let b = hesse();
        let mut rng = stream_rng(seed, 0);
        let r1 = adjoint_matrix(&haar_unitary(3, &mut rng), &b).unwrap().matrix;
        let r2 = adjoint_matrix(&haar_unitary(3, &mut rng), &b).unwrap().matrix;
        prop_assert!(stochastic_decompose(&r1, 1e-9).unwrap().stochastic);
        prop_assert!(stochastic_decompose(&(&r1 * &r2), 1e-9).unwrap().stochastic);
    }

    #[test]
    fn jacobi_identity_on_random_bases(seed: u64, d in 2usize..4) {
        let b = hermitian_basis(d, &mut stream_rng(seed, 0));
        let s = lie_structure(&b).unwrap();
        prop_assert!(jacobi_residual(&s) <= 1e-8 * s.max_abs().max(1.0).powi(2));
    }

    #[test]
    fn lie_structure_spectra_match_ad(seed: u64, d in 2usize..4) {
        let b = orthonormal_basis(d, &mut stream_rng(seed, 0));
        let s = lie_structure(&b).unwrap();
        for j in 0..b.len() {
            let vals = eigenvalues_hermitian(&s.matrix(j));
            let ad = ad_spectrum(b.get(j));
            for (x, y) in vals.iter().zip(&ad) {
                prop_assert!((x - y).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn jordan_spectrum_matches_f(seed: u64, d in 2usize..6) {
        let (_, dev) = jordan_spectrum_checked(&hermitian(d, &mut stream_rng(seed, 0)));
        prop_assert!(dev <= 1e-8);
    }

    #[test]
    fn jordan_symmetry_iff_orthonormal(seed: u64, d in 2usize..4, scaled: bool) {
        let mut rng = stream_rng(seed, 0);
        let b = if scaled {
            let s = rng.random_range(0.5..2.0);
            orthonormal_basis(d, &mut rng).map(|_, o| o.scale(s)).unwrap()
        } else {
            hermitian_basis(d, &mut rng)
        };
        let r = check_jordan_structure_lemma(&b, 1e-8).unwrap();
        prop_assert!(r.pass);
        prop_assert_eq!(r.verdicts["symmetric"], scaled);
    }

    #[test]
    fn jordan_rank_biconditional(seed: u64, d in prop::sample::select(vec![2usize, 4, 5]), k in 1usize..6) {
        let mut rng = stream_rng(seed, 0);
        let k = k.min(d);
        let u = haar_unitary(d, &mut rng);
        let mut diag = vec![0.0; d];
        for v in diag.iter_mut().take(k) {
            *v = rng.random_range(0.5..2.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
        }
        let a = HermitianOperator::from_real_diagonal(&diag).conjugate_by(&u);
        let (lhs, rhs) = jordan_rank_sides(&a, 1e-9);
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(rhs, k == 1);
    }

    #[test]
    fn basis_files_round_trip(seed: u64, d in 2usize..5) {
        let b = hermitian_basis(d, &mut stream_rng(seed, 0));
        let text = BasisFile::new(&b, None).to_json().unwrap();
        let parsed = BasisFile::parse(&text).unwrap();
        prop_assert_eq!(parsed.to_json().unwrap(), text);
        let back = parsed.basis().unwrap();
        for (x, y) in back.operators().iter().zip(b.operators()) {
            prop_assert_eq!(x.matrix(), y.matrix());
        }
    }

    #[test]
    fn adding_a_column_never_lowers_dimension(rows in prop::collection::vec(0u32..5, 1..6), m in 1usize..6) {
        let mut rows = rows;
        rows.sort_unstable_by(|a, b| b.cmp(a));
        let d = rows.len() + 1;
        let p = Partition::new(rows.clone()).unwrap();
        for r in rows.iter_mut().take(m.min(d - 1)) {
            *r += 1;
        }
        let bigger = Partition::new(rows).unwrap();
        prop_assert!(weyl_dimension(&bigger, d).unwrap() > weyl_dimension(&p, d).unwrap());
        prop_assert_eq!(weyl_dimension(&p.dual(d).unwrap(), d).unwrap(), weyl_dimension(&p, d).unwrap());
        prop_assert_eq!(p.conjugate().conjugate(), p);
    }
}

fn permute(idx: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == idx.len() {
        f(idx);
        return;
    }
    for i in k..idx.len() {
        idx.swap(k, i);
        permute(idx, k + 1, f);
        idx.swap(k, i);
    }
}

#[test]
fn reshuffle_images() {
    for d in 2..5 {
        let (ps, pa) = sym_antisym_projectors(d);
        let one = reshuffle(&Superoperator::identity_projector(d));
        assert!(max_abs(&(one - (&ps.matrix + &pa.matrix))) < 1e-10);
        let id = reshuffle(&Superoperator::identity(d));
        assert!(max_abs(&(&id - (&ps.matrix - &pa.matrix))) < 1e-10);
        assert!(max_abs(&(id - swap(d))) < 1e-13);
        assert!(max_abs(&(&ps.matrix * &ps.matrix - &ps.matrix)) < 1e-13);
        assert!(max_abs(&(&ps.matrix * &pa.matrix)) < 1e-13);
        let n = d * d;
        assert!(max_abs(&(&ps.matrix + &pa.matrix - ComplexMatrix::identity(n, n))) < 1e-13);
    }
}

#[test]
fn enumeration_is_exact_and_dual_closed() {
    for d in 2..=10 {
        let bound = (d * d - 1) as u128;
        let all = enumerate_small_irreps(d, bound).unwrap();
        assert_eq!(all.iter().filter(|x| x.pu_compatible).count(), 2);
        for x in &all {
            let dual = x.partition.dual(d).unwrap();
            assert_eq!(weyl_dimension(&dual, d).unwrap(), x.dimension);
        }
    }
}

#[test]
fn gell_mann_structure_is_hermitian() {
    let s = lie_structure(&gell_mann_basis(3)).unwrap();
    for j in 0..9 {
        let m = s.matrix(j);
        assert!(max_abs(&(&m - m.adjoint())) < 1e-12);
    }
}
