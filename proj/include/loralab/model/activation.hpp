// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace loralab::model {

/// Nonlinearity between the adapted layer and a frozen readout head.
inline double head_activation(double v) noexcept { return v > 0.0 ? v : 0.0; }

/// Its derivative, taken as 1 at 0 so a zero-initialized update still
/// receives gradient.
inline double head_activation_grad(double v) noexcept { return v >= 0.0 ? 1.0 : 0.0; }

}  // namespace loralab::model
