use super::{Task, VqaItem};

const INSTRUCTION: &str = "Answer with the option's letter from the given choices directly.";

pub fn question_sentence(task: Task) -> &'static str {
    match task {
        Task::Rotation3d => {
            "The image above shows a 3D structure made of unit cubes. Which one of the options below shows the same \
             structure seen from another angle, built without rotation and overlaps of its parts? Select the most \
             likely one."
        }
        Task::Projection3d => {
            "The image above shows a 3D structure made of unit cubes and a red arrow. Which one of the options below \
             is the silhouette of the structure when looking along the arrow? Select the most likely one."
        }
        Task::Combination3d => {
            "The two images above show a 3D structure from different angles. Which one of the options below could \
             be constructed to appear the same as both given views when observed from the corresponding \
             perspectives without rotation and overlaps? Select the most likely one."
        }
        Task::Folding3d => {
            "The image above shows the unfolded net of a cube. Which one of the options below shows the cube this \
             net folds into? Select the most likely one."
        }
        Task::Shapefind3d => {
            "The three images above show the same cube from different angles, with one face painted blue in the \
             last image. Which one of the options below shows the pattern hidden under the blue paint? Select the \
             most likely one."
        }
    }
}

/// `A`, `B`, ... for 0, 1, ...
pub fn option_letter(i: usize) -> char {
    assert!(i < 26, "option index {i} has no letter");
    (b'A' + i as u8) as char
}

pub fn emit_prompt(item: &VqaItem) -> String {
    let mut s = String::from("<image>\nQuestion: ");
    s.push_str(question_sentence(item.task));
    s.push_str("\nOptions:\n");
    for i in 0..item.option_count() {
        let l = option_letter(i);
        s.push_str(&format!("{l}. {l}\n"));
    }
    s.push_str(INSTRUCTION);
    s
}
