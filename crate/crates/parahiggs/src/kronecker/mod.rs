//! Kronecker moduli: matrix tuples under base change on both sides.

pub mod blowup;
pub mod char0;
pub mod existence;
pub mod king;
pub mod onepsg;
pub mod pencil;
pub mod scaling;
pub mod tuple;

pub use blowup::{
    blowup, blowup_certificate, blowup_certificate_q, BlowupCertificate, BlowupCertificateJson,
};
pub use char0::{decide_char0, Char0Status, Char0Verdict, PrimeReport, CHAR0_PRIMES};
pub use existence::{existence, existence_schur, tits_form, Existence, ExistenceReport};
pub use king::{
    for_each_invariant_pair, king_bruteforce, king_defect, king_geometric, ExtensionWitness,
    GeometricVerdict, GeometricVerdictJson, StabilityVerdict, Status, VerdictJson, WitnessJson,
};
pub use onepsg::{
    coprime_pair, mu_chi, mu_chi_eigen, Grading, GradingPartJson, Mu, OneParamSubgroup,
    OneParamSubgroupJson,
};
pub use pencil::{pencil, PencilResult};
pub use scaling::{exact_witness, king_scaling, lift_and_verify, ScalingStatus, ScalingVerdict};
pub use tuple::{
    parse_field_tag, parse_tuple, random_invertible, AnyTuple, MatrixTuple, SubspaceJson, TupleJson,
};
