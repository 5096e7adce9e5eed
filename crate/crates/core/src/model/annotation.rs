//! The closed annotation vocabulary and tri-state values.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Answer to a closed question about the model. An absent annotation reads
/// as `Unknown`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

impl TriState {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TriState::Yes
        } else {
            TriState::No
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TriState::Yes => "yes",
            TriState::No => "no",
            TriState::Unknown => "unknown",
        }
    }
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which kind of model item an annotation key belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnnotationScope {
    Element,
    Flow,
    Session,
}

impl fmt::Display for AnnotationScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnnotationScope::Element => "element",
            AnnotationScope::Flow => "flow",
            AnnotationScope::Session => "session",
        })
    }
}

macro_rules! annotation_keys {
    ($( $scope:ident { $( $variant:ident => $name:literal ),* $(,)? } )*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum AnnotationKey {
            $( $( $variant, )* )*
        }

        impl AnnotationKey {
            pub const ALL: &'static [AnnotationKey] = &[ $( $( AnnotationKey::$variant, )* )* ];

            pub fn name(self) -> &'static str {
                match self {
                    $( $( AnnotationKey::$variant => $name, )* )*
                }
            }

            pub fn scope(self) -> AnnotationScope {
                match self {
                    $( $( AnnotationKey::$variant => AnnotationScope::$scope, )* )*
                }
            }

            pub fn from_name(name: &str) -> Option<Self> {
                match name {
                    $( $( $name => Some(AnnotationKey::$variant), )* )*
                    _ => None,
                }
            }
        }
    };
}

annotation_keys! {
    Element {
        IsAuthenticationPoint => "is_authentication_point",
        VerifiesPeerIdentity => "verifies_peer_identity",
        PerformsAuthorization => "performs_authorization",
        AuthorizationContextual => "authorization_contextual",
        AuthorizationRevocable => "authorization_revocable",
        SupportsMultiFactor => "supports_multi_factor",
        AllowsAuthDowngrade => "allows_auth_downgrade",
        RequiresReauthentication => "requires_reauthentication",
        LogsCriticalAccess => "logs_critical_access",
        ResourceLimited => "resource_limited",
        MonitorsExternalInteraction => "monitors_external_interaction",
        EncryptedAtRest => "encrypted_at_rest",
        AccessControlled => "access_controlled",
        CredentialStorageSecure => "credential_storage_secure",
        KeyLifecycleManaged => "key_lifecycle_managed",
        UsesStandardCrypto => "uses_standard_crypto",
        ValidatesInput => "validates_input",
    }
    Flow {
        ChannelEncrypted => "channel_encrypted",
        EndpointAuthenticated => "endpoint_authenticated",
        ReplayProtected => "replay_protected",
        IntegrityProtected => "integrity_protected",
    }
    Session {
        SecureChannel => "secure_channel",
        IdEncryptedInTransit => "id_encrypted_in_transit",
        IdHardToGuess => "id_hard_to_guess",
        IdNotInUrl => "id_not_in_url",
        ServerSideValidation => "server_side_validation",
        SecureCookies => "secure_cookies",
        IdBoundToClient => "id_bound_to_client",
        SingleEndpointEnforced => "single_endpoint_enforced",
        TimeoutSet => "timeout_set",
        InvalidatedOnLogout => "invalidated_on_logout",
        RenewedOnPrivilegeChange => "renewed_on_privilege_change",
        LifecycleMonitored => "lifecycle_monitored",
        ReauthAfterInactivity => "reauth_after_inactivity",
    }
}

impl AnnotationKey {
    pub fn keys_for(scope: AnnotationScope) -> impl Iterator<Item = AnnotationKey> {
        AnnotationKey::ALL
            .iter()
            .copied()
            .filter(move |k| k.scope() == scope)
    }
}

impl fmt::Display for AnnotationKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Known answers for one model item. Only `Yes`/`No` are stored; writing
/// `Unknown` removes the key.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Annotations(BTreeMap<AnnotationKey, bool>);

impl Annotations {
    pub fn new() -> Self {
        Annotations::default()
    }

    pub fn get(&self, key: AnnotationKey) -> TriState {
        match self.0.get(&key) {
            Some(&b) => TriState::from_bool(b),
            None => TriState::Unknown,
        }
    }

    pub fn set(&mut self, key: AnnotationKey, value: TriState) {
        match value {
            TriState::Yes => {
                self.0.insert(key, true);
            }
            TriState::No => {
                self.0.insert(key, false);
            }
            TriState::Unknown => {
                self.0.remove(&key);
            }
        }
    }

    pub fn remove(&mut self, key: AnnotationKey) -> TriState {
        match self.0.remove(&key) {
            Some(b) => TriState::from_bool(b),
            None => TriState::Unknown,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (AnnotationKey, bool)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
