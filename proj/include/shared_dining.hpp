#pragma once

#include "shared_dining/bench.hpp"
#include "shared_dining/bytes.hpp"
#include "shared_dining/dc_core.hpp"
#include "shared_dining/errors.hpp"
#include "shared_dining/field_matrix.hpp"
#include "shared_dining/framing.hpp"
#include "shared_dining/gf256.hpp"
#include "shared_dining/random.hpp"
#include "shared_dining/secret_sharing.hpp"
#include "shared_dining/security_probe.hpp"
#include "shared_dining/sim_net.hpp"
#include "shared_dining/wire.hpp"
