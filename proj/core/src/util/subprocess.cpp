#include "repofix/util/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

extern char** environ;

namespace repofix::util {

namespace {

void set_cloexec(int fd) { fcntl(fd, F_SETFD, FD_CLOEXEC); }

// Drains a fd into `out`; returns false once the fd reports EOF or error.
bool drain(int fd, std::string& out) {
    char buf[4096];
    for (;;) {
        ssize_t n = read(fd, buf, sizeof buf);
        if (n > 0) {
            out.append(buf, static_cast<std::size_t>(n));
            if (static_cast<std::size_t>(n) < sizeof buf) return true;
            continue;
        }
        if (n == 0) return false;
        if (errno == EAGAIN || errno == EWOULDBLOCK) return true;
        if (errno == EINTR) continue;
        return false;
    }
}

}  // namespace

SubprocessResult run_command(const std::vector<std::string>& argv,
                             const std::filesystem::path& cwd,
                             const std::map<std::string, std::string>& extra_env,
                             double timeout_seconds) {
    SubprocessResult result;
    if (argv.empty()) {
        result.spawn_failed = true;
        result.spawn_error = "empty command";
        return result;
    }

    int out_pipe[2], err_pipe[2], status_pipe[2];
    if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0 || pipe(status_pipe) != 0) {
        result.spawn_failed = true;
        result.spawn_error = std::strerror(errno);
        return result;
    }
    set_cloexec(status_pipe[1]);

    pid_t pid = fork();
    if (pid < 0) {
        result.spawn_failed = true;
        result.spawn_error = std::strerror(errno);
        return result;
    }

    if (pid == 0) {
        // child
        setpgid(0, 0);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        close(out_pipe[0]);
        close(out_pipe[1]);
        close(err_pipe[0]);
        close(err_pipe[1]);
        close(status_pipe[0]);
        if (!cwd.empty() && chdir(cwd.c_str()) != 0) {
            int err = errno;
            (void)!write(status_pipe[1], &err, sizeof err);
            _exit(127);
        }
        for (const auto& [k, v] : extra_env) setenv(k.c_str(), v.c_str(), 1);
        std::vector<char*> cargv;
        cargv.reserve(argv.size() + 1);
        for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
        cargv.push_back(nullptr);
        execvp(cargv[0], cargv.data());
        int err = errno;
        (void)!write(status_pipe[1], &err, sizeof err);
        _exit(127);
    }

    close(out_pipe[1]);
    close(err_pipe[1]);
    close(status_pipe[1]);
    fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
    fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);

    // Exec success closes the status pipe without writing; an errno means
    // the command could not be started at all.
    {
        int err = 0;
        ssize_t n;
        do {
            n = read(status_pipe[0], &err, sizeof err);
        } while (n < 0 && errno == EINTR);
        if (n == static_cast<ssize_t>(sizeof err)) {
            result.spawn_failed = true;
            result.spawn_error = std::strerror(err);
        }
    }
    close(status_pipe[0]);

    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration<double>(timeout_seconds);
    bool out_open = true, err_open = true;

    while (out_open || err_open) {
        auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                             deadline - std::chrono::steady_clock::now())
                             .count();
        if (remaining <= 0) {
            result.timed_out = true;
            kill(-pid, SIGKILL);
            kill(pid, SIGKILL);
            break;
        }
        struct pollfd fds[2];
        nfds_t nfds = 0;
        if (out_open) fds[nfds++] = {out_pipe[0], POLLIN, 0};
        if (err_open) fds[nfds++] = {err_pipe[0], POLLIN, 0};
        int rc = poll(fds, nfds, static_cast<int>(remaining));
        if (rc < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (rc == 0) continue;  // re-check deadline
        for (nfds_t i = 0; i < nfds; ++i) {
            if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
            if (fds[i].fd == out_pipe[0]) {
                if (!drain(out_pipe[0], result.stdout_text)) out_open = false;
            } else {
                if (!drain(err_pipe[0], result.stderr_text)) err_open = false;
            }
        }
    }

    // Final drain catches output written between the last poll and exit.
    drain(out_pipe[0], result.stdout_text);
    drain(err_pipe[0], result.stderr_text);
    close(out_pipe[0]);
    close(err_pipe[0]);

    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        result.exit_code = 128 + WTERMSIG(status);

    return result;
}

}  // namespace repofix::util
