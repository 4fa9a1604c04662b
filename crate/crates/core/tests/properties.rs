use std::collections::BTreeMap;

use csix_core::*;
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = ProblemInstance> {
    (2usize..=8).prop_flat_map(|n| (Just(n), 1..=n)).prop_map(|(n, k)| ProblemInstance::new(n, k).unwrap())
}

fn decode_in_order(
    instance: &ProblemInstance,
    client: ClientId,
    truth: &PayloadStore,
    packets: &[CodedPacket],
) -> DecoderState {
    let mut d = decoder_init(instance, client, truth).unwrap();
    for p in packets.iter().filter(|p| p.sender() != client) {
        d.ingest(p).unwrap();
    }
    d
}

#[test]
fn schedule_structure_matches_plan() {
    for n in 2..=20 {
        for k in 1..=n {
            let i = ProblemInstance::new(n, k).unwrap();
            let s = build_schedule(&i);
            let plan = plan_transmissions(&i);
            assert_eq!(s.sender_counts(), plan, "{i}");
            for e in s.entries() {
                assert!(e.vector.support().iter().all(|p| p.involves(e.sender)), "{i}: {e}");
                assert!(matches!(e.vector.len(), 1 | 2));
            }
            for sender in i.clients().filter(|c| c.index() > k) {
                let (coded, plain): (Vec<_>, Vec<_>) =
                    s.entries_from(sender).partition(|e| e.vector.len() == 2);
                assert_eq!(coded.len(), k - 1, "{i} {sender}");
                assert_eq!(plain.len(), n - sender.index(), "{i} {sender}");
            }
            let mut last = (0, 0);
            for e in s.entries() {
                assert!((e.sender.index(), e.j) > last);
                last = (e.sender.index(), e.j);
            }
        }
    }
}

#[test]
fn every_instance_decodes_up_to_twelve() {
    for n in 2..=12 {
        for k in 1..=n {
            let i = ProblemInstance::new(n, k).unwrap();
            let r = run_exchange(&i, 17, 48).unwrap();
            assert!(r.success, "{i}: {r}");
            assert_eq!(r.total_transmissions, optimal_count(&i));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decoding_is_order_independent(
        (i, order) in instance().prop_flat_map(|i| {
            let len = build_schedule(&i).len();
            (Just(i), Just((0..len).collect::<Vec<_>>()).prop_shuffle())
        }),
        seed in any::<u64>(),
    ) {
        let truth = generate_payloads(&i, seed, 32).unwrap();
        let packets: Vec<_> = build_schedule(&i).entries().iter().map(|e| encode(e, &truth).unwrap()).collect();
        let shuffled: Vec<_> = order.iter().map(|&x| packets[x].clone()).collect();
        for client in i.clients() {
            let a = decode_in_order(&i, client, &truth, &packets);
            let b = decode_in_order(&i, client, &truth, &shuffled);
            prop_assert_eq!(a.rank(), b.rank());
            prop_assert_eq!(a.solved(), b.solved());
        }
    }

    #[test]
    fn recovered_payloads_match_ground_truth(i in instance(), seed in any::<u64>(), width in 1usize..200) {
        let truth = generate_payloads(&i, seed, width).unwrap();
        let packets: Vec<_> = build_schedule(&i).entries().iter().map(|e| encode(e, &truth).unwrap()).collect();
        for client in i.privileged() {
            let d = decode_in_order(&i, client, &truth, &packets);
            prop_assert!(d.is_complete());
            prop_assert_eq!(d.solved(), &truth);
        }
        // passive clients may be incomplete but never wrong
        for client in i.clients() {
            let d = decode_in_order(&i, client, &truth, &packets);
            for (p, v) in d.solved() {
                prop_assert_eq!(&truth[p], v);
            }
        }
    }

    #[test]
    fn feasibility_checks_agree(
        (i, y) in (2usize..=10)
            .prop_flat_map(|n| (Just(n), 1..=n, proptest::collection::vec(0usize..12, n)))
            .prop_map(|(n, k, y)| (ProblemInstance::new(n, k).unwrap(), TransmissionPlan::new(y))),
    ) {
        prop_assert_eq!(check_feasibility(&y, &i).unwrap(), exhaustive_feasibility(&y, &i).unwrap());
    }

    #[test]
    fn random_pair_subsets_decode_consistently(
        i in instance(),
        picks in proptest::collection::vec(any::<(usize, usize)>(), 0..40),
        seed in any::<u64>(),
    ) {
        // arbitrary (not schedule) packets: solved payloads are still exact
        // and the basis never exceeds the universe
        let truth = generate_payloads(&i, seed, 16).unwrap();
        let client = i.client(1).unwrap();
        let mut d = decoder_init(&i, client, &truth).unwrap();
        let n = i.n();
        for (a, b) in picks {
            let sender = i.client(a % n + 1).unwrap();
            let other = (b % (n - 1)) + 1;
            let other = if other >= sender.index() { other + 1 } else { other };
            let p = i.pair(sender.index(), other).unwrap();
            let vec = CodingVector::single(p);
            let mut store = BTreeMap::new();
            store.insert(p, truth[&p].clone());
            let entry = ScheduleEntry { sender, j: 1, vector: vec };
            d.ingest(&encode(&entry, &store).unwrap()).unwrap();
            prop_assert!(d.rank() <= i.universe_size());
        }
        for (p, v) in d.solved() {
            prop_assert_eq!(&truth[p], v);
        }
    }
}
