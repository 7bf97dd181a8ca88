use lpsnn_core::codec::{decode_chromosome, decode_gene, encode_gene, GENE_BITS};
use lpsnn_core::ga::{baker_probabilities, crossover_with_mask};
use lpsnn_core::srm::{membrane_potential, psp_kernel, refractory_kernel, simulate_network};
use lpsnn_core::{Chromosome, Genome, SimParams, SpikeTrain, SynapseValue, Topology, WeightScheme};
use proptest::prelude::*;

fn scheme() -> impl Strategy<Value = WeightScheme> {
    prop_oneof![Just(WeightScheme::HalfStep), Just(WeightScheme::Integer)]
}

fn topology() -> impl Strategy<Value = Topology> {
    prop::collection::vec(1usize..5, 2..4).prop_map(|sizes| Topology::new(sizes).unwrap())
}

proptest! {
    #[test]
    fn kernels_vanish_before_onset(t in -100.0f64..=0.0, tau in 0.1f64..50.0, theta in 0.1f64..10.0) {
        prop_assert_eq!(psp_kernel(t, tau).unwrap(), 0.0);
        prop_assert_eq!(refractory_kernel(t, theta, tau).unwrap(), 0.0);
    }

    #[test]
    fn psp_never_exceeds_its_peak(t in 0.0f64..200.0, tau in 0.1f64..50.0) {
        let peak = psp_kernel(tau, tau).unwrap();
        prop_assert!(psp_kernel(t, tau).unwrap() <= peak + 1e-15);
        prop_assert!(psp_kernel(t, tau).unwrap() >= 0.0);
    }

    #[test]
    fn refractory_is_negative_and_recovering(t in 0.001f64..200.0, dt in 0.001f64..10.0) {
        let a = refractory_kernel(t, 1.5, 20.0).unwrap();
        let b = refractory_kernel(t + dt, 1.5, 20.0).unwrap();
        prop_assert!(a < 0.0 && a > -6.0);
        prop_assert!(b > a);
    }

    #[test]
    fn potential_is_linear_in_weight(w in -3.0f64..4.0, t in 0.0f64..50.0, s in 0.0f64..20.0) {
        let train = SpikeTrain::single(s).unwrap();
        let p = SimParams::default();
        let one = membrane_potential(t, &[(SynapseValue::new(1.0, 2.0), &train)], None, &p).unwrap();
        let scaled = membrane_potential(t, &[(SynapseValue::new(w, 2.0), &train)], None, &p).unwrap();
        prop_assert!((scaled - w * one).abs() < 1e-12);
    }

    #[test]
    fn gene_roundtrip(bits in prop::array::uniform6(any::<bool>()), scheme in scheme()) {
        let v = decode_gene(&bits, scheme).unwrap();
        prop_assert_eq!(encode_gene(v, scheme).unwrap(), bits);
    }

    #[test]
    fn genome_text_roundtrip(topo in topology(), scheme in scheme(), seed in any::<u64>()) {
        let len = topo.synapse_count() * GENE_BITS;
        let bits: Vec<bool> = (0..len).map(|i| (seed.rotate_left(i as u32 % 64) ^ i as u64) & 1 == 1).collect();
        let g = Genome::new(scheme, topo.clone(), Chromosome::new(bits)).unwrap();
        let back: Genome = g.to_string().parse().unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(decode_chromosome(&back.chromosome, &topo, scheme).unwrap().len(), topo.synapse_count());
    }

    #[test]
    fn baker_sums_to_one(n in 2usize..500, sp in 1.0f64..=2.0) {
        let p = baker_probabilities(n, sp).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(p.windows(2).all(|w| w[0] >= w[1]));
        if sp < 2.0 {
            prop_assert!((p[0] / p[n - 1] - sp / (2.0 - sp)).abs() < 1e-9 * sp / (2.0 - sp));
        }
    }

    #[test]
    fn crossover_preserves_bit_multiset(
        a in prop::collection::vec(any::<bool>(), 36),
        b in prop::collection::vec(any::<bool>(), 36),
        mask in prop::collection::vec(any::<bool>(), 36),
    ) {
        let (c1, c2) = crossover_with_mask(&Chromosome::new(a.clone()), &Chromosome::new(b.clone()), &mask).unwrap();
        for i in 0..36 {
            let mut parents = [a[i], b[i]];
            let mut children = [c1.bits()[i], c2.bits()[i]];
            parents.sort();
            children.sort();
            prop_assert_eq!(parents, children);
        }
    }

    #[test]
    fn heavier_weight_never_fires_later(w in 1u8..8, d in 1.0f64..=8.0) {
        // One input at 1 ms driving one neuron through a single synapse.
        let topo: Topology = "1-1".parse().unwrap();
        let input = [SpikeTrain::single(1.0).unwrap()];
        let params = SimParams::default().with_threshold(1.0);
        let first = |w: f64| {
            simulate_network(&topo, &[SynapseValue::new(w, d.round())], &input, &params).unwrap()[0].first()
        };
        let light = first(f64::from(w) - 1.0);
        let heavy = first(f64::from(w));
        match (light, heavy) {
            (Some(l), Some(h)) => prop_assert!(h <= l),
            (Some(_), None) => prop_assert!(false, "heavier synapse went silent"),
            _ => {}
        }
    }
}
