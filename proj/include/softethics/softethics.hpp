#pragma once

#include "softethics/model.hpp"
#include "softethics/soundness.hpp"
#include "softethics/elicitation.hpp"
#include "softethics/profile.hpp"
#include "softethics/corpus.hpp"
#include "softethics/session.hpp"
#include "softethics/store.hpp"
#include "softethics/service.hpp"
#include "softethics/fixtures.hpp"
