fn main() {
    // die quietly when the output pipe closes instead of panicking
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(sumprodlab::cli::run_from_env());
}
