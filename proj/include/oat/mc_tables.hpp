// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace oat {

extern const int kMcEdgeTable[256];
extern const int kMcTriTable[256][16];
extern const int kMcEdgeVerts[12][2];
extern const int kMcCornerOffset[8][3];

}  // namespace oat
