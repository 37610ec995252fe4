//! Quantum data-processing and Markov monogamy inequalities: entropic witnesses of
//! non-Markovian quantum dynamics in chain and process-tensor form.

pub mod channel;
pub mod classical;
pub mod error;
pub mod experiments;
pub mod info;
pub mod proctensor;
pub mod state;
pub mod tensor;
pub mod witness;

pub use channel::{
    adjoint_channel, choi_of, choi_to_kraus, compose, dilation_to_kraus, link_product,
    random_channel, ChoiState, KrausChannel, KrausMap, LabelledOperator, StinespringDilation,
};
pub use classical::{
    classical_cmi, classical_mi, cmmi_gap, is_markov, joint_from_chain, markov_deviation,
    random_chain, shannon_entropy, ClassicalChain, JointPMF,
};
pub use error::{Error, Result};
pub use experiments::{
    extra_dpi_row, gamma_sequence, mqmmi_row, nonmarkov_witness_row, sweep, u_lambda, verify,
    CheckResult, LambdaSweepConfig, SweepKind, SweepRow, VerifyConfig, VerifySummary,
};
pub use info::{
    chain_coherent_information, coherent_information, conditional_mutual_information,
    mutual_information, von_neumann, Bits, EPSILON,
};
pub use proctensor::{
    build_process_tensor, choi_dpi_witnesses, markov_factorization_gap, mqmmi_witness,
    multitime_coherent_info, CoherentKind, Instrument, ProcessTensor, SystemEnvCircuit,
};
pub use state::{
    example_initial_state, maximally_entangled, purify, random_density, validate_density,
    DensityMatrix, PureState, Purification,
};
pub use tensor::{
    dagger, hermitian_eig, is_unitary, kron, partial_trace, ComplexMatrix, DimSignature,
    HermitianSpectrum, C64,
};
pub use witness::{
    conjecture_minimum, extra_dpi_witnesses, m4_witness, m6_witnesses, m8_witnesses,
    monogamy_conjecture_gap, permutations, qdpi_witnesses, MarkovChainProcess, WitnessReport,
};
