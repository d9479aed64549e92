//! Almost-sure liveness of parameterised randomised systems, proved by
//! synthesising regular advice bits for two-player reachability games.

pub mod automata;
pub mod model;
pub mod oracle;
pub mod verify;
pub mod synth;
pub mod cegar;
pub mod mono;
pub mod learn;
pub mod symmetry;
pub mod incr;
pub mod cert;
