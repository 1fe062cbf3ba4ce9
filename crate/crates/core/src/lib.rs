pub mod mesh;
pub mod problem;
pub mod fem;
pub mod certificate;
pub mod oracle;
pub mod cli;
