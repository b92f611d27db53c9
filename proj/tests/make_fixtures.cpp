// Copyright 2026 The qdsrg Authors
// SPDX-License-Identifier: Apache-2.0

// Regenerates the FCIDUMP fixtures under tests/fixtures from the toy model.
#include "support.hpp"

#include <qdsrg/fcidump.hpp>

#include <cstdio>
#include <fstream>
#include <string>

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: make_fixtures <dir>\n");
        return 2;
    }
    const std::string dir = argv[1];
    auto put = [&](const std::string& name, const qdsrg::SpatialIntegrals& s) {
        std::ofstream(dir + "/" + name) << qdsrg::write_fcidump(s);
    };
    put("toy_4o2e.fcidump", qdsrg::testing::toy_integrals(4, 2, 11));
    put("toy_6o4e.fcidump", qdsrg::testing::toy_integrals(6, 4, 12));
    const double gaps[] = {1.0, 0.6, 0.3, 0.1};
    for (int k = 0; k < 4; ++k)
        put("stretch_" + std::to_string(k) + ".fcidump", qdsrg::testing::toy_integrals(4, 2, 11, gaps[k]));
    return 0;
}
