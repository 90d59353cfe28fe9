pub mod s4_oracle;
