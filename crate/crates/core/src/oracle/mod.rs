//! Brute-force ground truth: congruence of small symmetric matrices,
//! orthogonal groups over `F2`, good matrices and the odd-relation matrix.

pub mod check;
pub mod classify;
pub mod congruence;
pub mod good;
pub mod lemma;
pub mod matrix;
pub mod orthogonal;
pub mod trials;

pub use check::{
    oracle_agreement, oracle_relation_check, AgreementReport, Mismatch, RankAgreement, RelationCheckReport,
    RelationWitness, WitnessMethod,
};
pub use classify::{classify_small, Classification, DEFAULT_CLASSIFY_CAP};
pub use congruence::{
    congruent_bfs, diagonalize, generator_moves, orbit, Diagonalization, Move, Verdict, DEFAULT_VISITED_CAP,
};
pub use good::{
    apply_good, factor_into_good, is_good_matrix, random_good_matrix, verify_factorization, GoodMatrixCertificate,
};
pub use lemma::{
    check_default_classes, lemma_self_test, odd_relation_congruence, odd_relation_matrix, odd_relation_matrix_default,
    OddRelationWitness,
};
pub use matrix::{RingMatrix, SymMatrix};
pub use orthogonal::{orthogonal_group, permutation_matrix, permutations, phi, OrthogonalGroup, PhiChecks};
pub use trials::{factorization_trials, lemma_trials, TrialReport};
