// Copyright (C) 2026 The FFAD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ffad/autoencoder.hpp"
#include "ffad/dataset.hpp"
#include "ffad/error.hpp"
#include "ffad/fft.hpp"
#include "ffad/fourier.hpp"
#include "ffad/frechet.hpp"
#include "ffad/gru.hpp"
#include "ffad/linalg.hpp"
#include "ffad/random.hpp"
#include "ffad/synthetic.hpp"
