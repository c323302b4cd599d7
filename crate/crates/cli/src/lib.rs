// SPDX-License-Identifier: Apache-2.0

//! Library side of the `fockgate` binary, exposed for integration tests.

pub mod commands;
pub mod config;
pub mod error;
