#pragma once

// Runs the built CLI binary (path from SCMI_CLI_PATH) and captures stdout
// plus the exit code. Stderr passes through to the test log.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace testcli {

struct Run {
    int exit_code = -1;
    std::string out;
};

inline std::string binary_path() {
    const char* env = std::getenv("SCMI_CLI_PATH");
    if (!env || !*env) throw std::runtime_error("SCMI_CLI_PATH is not set");
    return env;
}

inline Run run(const std::string& args) {
    const std::string command = binary_path() + " " + args;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed for: " + command);
    Run result;
    std::array<char, 4096> buffer{};
    std::size_t got = 0;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        result.out.append(buffer.data(), got);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

inline std::string write_temp_model(const std::string& name, const std::string& text) {
    const std::string path = std::string("/tmp/scmi_test_") + name + ".scm.txt";
    FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
    return path;
}

}  // namespace testcli
