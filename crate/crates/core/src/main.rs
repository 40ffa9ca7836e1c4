// SPDX-License-Identifier: Apache-2.0

use std::io::{self, IsTerminal};

fn main() {
    let env = std::env::var(propforge::cli::MAX_FREE_ENV).ok();
    let stdin = io::stdin();
    let interactive = stdin.is_terminal();
    let code = propforge::cli::run(
        std::env::args_os(),
        env.as_deref(),
        &mut stdin.lock(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
        interactive,
    );
    std::process::exit(code);
}
