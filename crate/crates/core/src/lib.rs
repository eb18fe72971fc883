pub mod background;
pub mod cli;
pub mod config;
pub mod exponential;
pub mod floquet;
pub mod halfline;
pub mod numerics;
pub mod report;
pub mod soliton;
pub mod spectrum;
