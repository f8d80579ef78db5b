use oil_core::fields::{Field, PrimeField};
use oil_core::groebner::{buchberger, GroebnerConfig};
use oil_core::idealmem::{HomogeneousIdeal, MacaulayEngine, ResourceLimits};
use oil_core::poly::{monomials_of_degree, MonomialOrder, Polynomial};
use proptest::prelude::*;

fn build(f: &PrimeField, n: usize, d: u32, picks: &[(usize, i64)]) -> Polynomial<PrimeField> {
    let monos = monomials_of_degree(n * n, d, MonomialOrder::Degrevlex);
    Polynomial::from_terms(f, n, picks.iter().map(|&(k, c)| (monos[k % monos.len()].clone(), f.from_i64(c))))
}

fn terms() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..1000, -3i64..=3), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn macaulay_and_groebner_agree(
        gens in prop::collection::vec((1u32..=2, terms()), 1..4),
        targets in prop::collection::vec((1u32..=3, terms()), 1..4),
        lex in any::<bool>(),
    ) {
        let f = PrimeField::new(7).unwrap();
        let n = 2;
        let gens: Vec<_> = gens.iter().map(|(d, t)| build(&f, n, *d, t)).filter(|g| !g.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let ideal = HomogeneousIdeal::new(&f, n, gens.clone()).unwrap();
        let order = if lex { MonomialOrder::Lex } else { MonomialOrder::Degrevlex };
        let config = GroebnerConfig { degree_bound: Some(3), ..GroebnerConfig::default() };
        let gb = buchberger(&ideal, order, &config).unwrap();
        let mut engine = MacaulayEngine::new(ideal, ResourceLimits::default());
        for (d, t) in &targets {
            let p = build(&f, n, *d, t);
            prop_assert_eq!(engine.member(&p).unwrap(), gb.member(&p).unwrap());
        }
        // products with generators always lie in the ideal
        for (g, (d, t)) in gens.iter().zip(&targets) {
            let p = &build(&f, n, *d, t) * g;
            if p.homogeneous_degree().is_ok_and(|e| e <= 3) {
                prop_assert!(gb.member(&p).unwrap());
            }
        }
    }
}
