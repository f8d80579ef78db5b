use num_bigint::BigUint;
use oil_core::exterior::{lemma1_rank_check, lemma5_spanning, weyl_dim, WeightVector};
use oil_core::fields::{binom, Field, PrimeField, Rationals};
use oil_core::genmat::{
    minor, rel, theorem1_set, trace_invariant, v_space_spanning_set, span_rank, weyman_thm5_set, MinorSpec,
};
use oil_core::idealmem::{ideal_equal, member, minimal_generator_count, HomogeneousIdeal, MacaulayEngine, ResourceLimits};
use oil_core::matrix::Matrix;
use oil_core::orbits::{jordan_matrix, jordan_type, orbit_sample, partition_mu, partitions, Partition};
use oil_core::poly::Polynomial;

fn parse<F: Field>(f: &F, n: usize, s: &str) -> Polynomial<F> {
    Polynomial::parse(f, n, s).unwrap()
}

fn part(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

#[test]
fn binomials() {
    assert_eq!(binom(4, 3), BigUint::from(4u32));
    assert_eq!(binom(3, 0), BigUint::from(1u32));
    assert_eq!(binom(40, 20), BigUint::from(137_846_528_820u64));
}

#[test]
fn squaring_a_trace_in_characteristic_two() {
    let t = parse(&Rationals, 2, "F[1,1] + F[2,2]");
    assert_eq!(&t * &t, parse(&Rationals, 2, "F[1,1]^2 + 2*F[1,1]*F[2,2] + F[2,2]^2"));
    let f2 = PrimeField::new(2).unwrap();
    let t = parse(&f2, 2, "F[1,1] + F[2,2]");
    assert_eq!(&t * &t, parse(&f2, 2, "F[1,1]^2 + F[2,2]^2"));
}

#[test]
fn rel_of_one_two() {
    let q = Rationals;
    for n in 2..=4 {
        for a in 1..=n {
            for b in 1..=n {
                let t1 = trace_invariant(&q, 1, n).unwrap();
                let phi2: Polynomial<_> = (1..=n)
                    .map(|c| &Polynomial::var(&q, n, a, c) * &Polynomial::var(&q, n, c, b))
                    .fold(Polynomial::zero(&q, n), |acc, p| &acc + &p);
                let expect = &(&t1 * &Polynomial::var(&q, n, a, b)) - &phi2;
                assert_eq!(rel(&q, 1, 2, &[a], &[b], n).unwrap(), expect);
            }
        }
        assert_eq!(rel(&q, n, n, &[], &[], n).unwrap(), trace_invariant(&q, n, n).unwrap());
    }
}

#[test]
fn v_space_dimensions() {
    let q = Rationals;
    assert_eq!(span_rank(&q, 3, 1, &v_space_spanning_set(&q, 1, 1, 3).unwrap()), 9);
    assert_eq!(span_rank(&q, 3, 2, &v_space_spanning_set(&q, 1, 2, 3).unwrap()), 9);
    assert_eq!(span_rank(&q, 4, 3, &v_space_spanning_set(&q, 0, 3, 4).unwrap()), 1);
}

#[test]
fn membership_examples() {
    let q = Rationals;
    let limits = ResourceLimits::default();
    let i = HomogeneousIdeal::new(&q, 2, vec![parse(&q, 2, "F[1,1]")]).unwrap();
    assert!(member(&i, &parse(&q, 2, "F[1,1]*F[2,2]"), &limits).unwrap());
    assert!(!member(&i, &parse(&q, 2, "F[2,2]^2"), &limits).unwrap());
    let t1 = HomogeneousIdeal::new(&q, 2, vec![parse(&q, 2, "F[1,1] + F[2,2]")]).unwrap();
    let t1x2 = HomogeneousIdeal::new(&q, 2, vec![parse(&q, 2, "2*F[1,1] + 2*F[2,2]")]).unwrap();
    assert!(ideal_equal(&t1, &t1x2, &limits).unwrap());
    let a = HomogeneousIdeal::new(&q, 2, vec![parse(&q, 2, "F[1,2]")]).unwrap();
    assert!(!ideal_equal(&i, &a, &limits).unwrap());
}

#[test]
fn theorem1_sets_agree_at_three() {
    let q = Rationals;
    let limits = ResourceLimits::default();
    let a = HomogeneousIdeal::new(&q, 3, theorem1_set(&q, 3, 2).unwrap().polynomials()).unwrap();
    let b = HomogeneousIdeal::new(&q, 3, weyman_thm5_set(&q, 3, 2).unwrap().polynomials()).unwrap();
    assert!(ideal_equal(&a, &b, &limits).unwrap());
    assert_eq!(minimal_generator_count(&a, 1, &limits).unwrap(), 1);
    assert_eq!(minimal_generator_count(&a, 2, &limits).unwrap(), 9);
    assert_eq!(minimal_generator_count(&a, 3, &limits).unwrap(), 0);
}

#[test]
fn certificates_expand_to_the_target() {
    let f = PrimeField::new(5).unwrap();
    let n = 3;
    let ideal = HomogeneousIdeal::new(&f, n, theorem1_set(&f, n, 2).unwrap().polynomials()).unwrap();
    let mut engine = MacaulayEngine::new(ideal.clone(), ResourceLimits::default()).with_witnesses();
    for rows in [[1, 2], [1, 3], [2, 3]] {
        let m = minor(&f, &MinorSpec::new(rows.to_vec(), vec![1, 2]).unwrap(), n).unwrap();
        let w = engine.witness(&m).unwrap().expect("2-minors vanish on the square-zero locus");
        assert_eq!(w.expand(&ideal), m);
    }
    let outside = parse(&f, n, "F[1,2]*F[2,3]");
    assert!(engine.witness(&outside).unwrap().is_none());
}

#[test]
fn partitions_and_orbits() {
    assert_eq!(partition_mu(5, 2).unwrap(), part(&[2, 2, 1]));
    assert_eq!(partition_mu(4, 3).unwrap(), part(&[3, 1]));
    assert_eq!(part(&[2, 2, 1]).conjugate(), part(&[3, 2]));
    assert_eq!(partitions(6).len(), 11);
    assert!(part(&[1, 1, 1]).dominance_leq(&part(&[2, 1])).unwrap());
    assert!(!part(&[3]).dominance_leq(&part(&[2, 1])).unwrap());
    let f3 = PrimeField::new(3).unwrap();
    for lambda in partitions(5) {
        let j = jordan_matrix(&f3, &lambda, 5).unwrap();
        for k in 0..5 {
            let g = orbit_sample(&j, 11, k);
            assert_eq!(jordan_type(&g).unwrap(), lambda);
        }
    }
    assert_eq!(jordan_type(&Matrix::zeros(&Rationals, 3, 3)).unwrap(), part(&[1, 1, 1]));
}

#[test]
fn representation_counts() {
    assert_eq!(weyl_dim(&WeightVector(vec![1, 0, -1])).unwrap(), BigUint::from(8u32));
    assert_eq!(weyl_dim(&WeightVector(vec![1, -1])).unwrap(), BigUint::from(3u32));
    assert_eq!(weyl_dim(&WeightVector(vec![0, 0, 0, 0])).unwrap(), BigUint::from(1u32));
    // adjoint representation of GL(n) minus the trace
    for n in 2..=6usize {
        assert_eq!(weyl_dim(&WeightVector::adjoint_type(1, n)).unwrap(), BigUint::from((n * n - 1) as u32));
    }
    let r = lemma5_spanning(5, &Rationals).unwrap();
    assert!(r.full);
    assert_eq!(r.rank, 100);
    assert!(lemma1_rank_check(&Rationals, 1, 2, 3).unwrap().holds);
    assert!(lemma1_rank_check(&PrimeField::new(2).unwrap(), 1, 2, 3).is_err());
}
