pub mod engine_checks;
