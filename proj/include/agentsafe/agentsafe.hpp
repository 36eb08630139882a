#pragma once

#include "agentsafe/core/clock.hpp"
#include "agentsafe/core/digest.hpp"
#include "agentsafe/core/error.hpp"
#include "agentsafe/core/events.hpp"
#include "agentsafe/core/image_store.hpp"
#include "agentsafe/core/json_io.hpp"
#include "agentsafe/core/rng.hpp"
#include "agentsafe/core/text.hpp"
#include "agentsafe/gateway/embedder.hpp"
#include "agentsafe/gateway/gateway.hpp"
#include "agentsafe/gateway/live.hpp"
#include "agentsafe/gateway/scripted.hpp"
#include "agentsafe/dataset/generation.hpp"
#include "agentsafe/dataset/images.hpp"
#include "agentsafe/dataset/manifest.hpp"
#include "agentsafe/dataset/plan.hpp"
#include "agentsafe/dataset/taxonomy.hpp"
#include "agentsafe/world/world.hpp"
#include "agentsafe/agent/agent.hpp"
#include "agentsafe/planner/judge.hpp"
#include "agentsafe/planner/planner.hpp"
#include "agentsafe/social/diffusion.hpp"
#include "agentsafe/social/social.hpp"
#include "agentsafe/metrics/metrics.hpp"
#include "agentsafe/sim/config.hpp"
#include "agentsafe/sim/replay.hpp"
#include "agentsafe/sim/simulator.hpp"
#include "agentsafe/report/report.hpp"
