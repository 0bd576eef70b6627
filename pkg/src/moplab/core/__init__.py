# SPDX-FileCopyrightText: 2024 MopLab Developers
# SPDX-License-Identifier: Apache-2.0

"""Core library components."""
