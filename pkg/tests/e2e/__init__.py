# Copyright arelu-sdk contributors
# SPDX-License-Identifier: Apache-2.0
