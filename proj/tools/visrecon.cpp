// Copyright (c) 2026 The Visrecon Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>

int main() {
    std::puts("visrecon: subcommands not wired up yet");
    return 2;
}
