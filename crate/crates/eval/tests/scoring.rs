use dise_core::pipeline::{Dise, Task};
use dise_eval::{report, score, AnswerKey, AnswerRecord, Format, KeyEntry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn key(n: usize, seed: u64) -> AnswerKey {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let items = (0..n)
        .map(|i| {
            let task = Task::ALL[i % 5];
            let e = KeyEntry {
                correct_index: rng.gen_range(0..4),
                option_count: 4,
                task,
                dise_category: task.dise(),
            };
            (format!("{task}_{i}"), e)
        })
        .collect();
    AnswerKey { items }
}

#[test]
fn uniform_guessing_scores_a_quarter() {
    let k = key(10_000, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let letters = ["A", "B", "C", "D"];
    let answers: Vec<_> = k
        .items
        .keys()
        .map(|id| AnswerRecord::text(id, letters[rng.gen_range(0..4)]))
        .collect();
    let run = score(&k, &answers).unwrap();
    let acc = run.overall.accuracy().unwrap();
    assert!((acc - 0.25).abs() <= 0.03, "{acc}");
    assert_eq!(k.random_baseline(), 0.25);
}

#[test]
fn known_correctness_gives_exact_table() {
    // Task t answers its first `right[t]` of 20 items correctly.
    let right = [20usize, 15, 10, 5, 0];
    let k = key(100, 3);
    let mut seen: BTreeMap<Task, usize> = BTreeMap::new();
    let answers: Vec<_> = k
        .items
        .iter()
        .map(|(id, e)| {
            let t = Task::ALL.iter().position(|&t| t == e.task).unwrap();
            let n = seen.entry(e.task).or_default();
            *n += 1;
            let choice = if *n <= right[t] { e.correct_index } else { (e.correct_index + 1) % 4 };
            AnswerRecord::index(id, choice)
        })
        .collect();
    let run = score(&k, &answers).unwrap();
    for (t, r) in Task::ALL.into_iter().zip(right) {
        assert_eq!(run.by_task[&t].correct, r);
        assert_eq!(run.by_task[&t].total, 20);
    }
    // rotation and folding are both intrinsic-dynamic
    assert_eq!(run.by_quadrant[&Dise::IntrinsicDynamic].correct, 25);
    assert_eq!(run.by_quadrant[&Dise::ExtrinsicStatic].correct, 15);
    assert_eq!(run.by_quadrant[&Dise::ExtrinsicDynamic].correct, 10);
    assert_eq!(run.by_quadrant[&Dise::IntrinsicStatic].correct, 0);
    assert_eq!(run.overall.correct, 50);
    let text = report(&run, Format::Text);
    let acc_line = text.lines().nth(1).unwrap();
    let cells: Vec<&str> = acc_line.split_whitespace().collect();
    assert_eq!(&cells[2..], ["50.0", "100.0", "75.0", "50.0", "25.0", "0.0", "0.0", "62.5", "75.0", "50.0", "37.5", "58.3", "41.7", "62.5"]);
}
