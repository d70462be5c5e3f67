// SPDX-FileCopyrightText: 2026 fcmplan contributors
// SPDX-License-Identifier: Apache-2.0
#include <iostream>
int main(){ std::cout << "placeholder\n"; return 0; }
