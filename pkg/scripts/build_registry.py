#!/usr/bin/env python3
"""Regenerate the curated annotation registry shipped in annaforge/data.

The curated set covers the annotation families most implicated in analyzer
faults (nullability, warning suppression, test markers, dependency injection,
structural code generation) plus the framework-shipped fixture annotations.
Targets are curated to the common declaration positions; equivalence tuples
pair annotations with identical simple names and target sets only.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from annaforge.mutagen import DUMMY_SPEC
from annaforge.registry import (AnnotationSpec, ElementKind, EquivalenceTuple,
                                PropertySpec, Registry, Retention, load_registry_text,
                                write_registry)

K = ElementKind
DECL4 = frozenset({K.FIELD, K.LOCAL_VARIABLE, K.METHOD, K.PARAMETER})


def spec(fq, lib, targets, retention, props=(), define=None):
    return AnnotationSpec(
        fq_name=fq, library=lib, targets=frozenset(targets),
        retention=retention, properties=tuple(props), definition_source=define)


def p(name, kind, default=True):
    return PropertySpec(name, kind, has_default=default)


GEN_CTOR_DEF = """\
package io.annaforge.anno;

import java.lang.annotation.ElementType;
import java.lang.annotation.Retention;
import java.lang.annotation.RetentionPolicy;
import java.lang.annotation.Target;

@Target(ElementType.TYPE)
@Retention(RetentionPolicy.SOURCE)
public @interface GenerateNoArgsCtor {}
"""

GEN_GETTER_DEF = """\
package io.annaforge.anno;

import java.lang.annotation.ElementType;
import java.lang.annotation.Retention;
import java.lang.annotation.RetentionPolicy;
import java.lang.annotation.Target;

@Target(ElementType.FIELD)
@Retention(RetentionPolicy.SOURCE)
public @interface GenerateGetter {}
"""

AUTO_CLEANUP_DEF = """\
package io.annaforge.anno;

import java.lang.annotation.ElementType;
import java.lang.annotation.Retention;
import java.lang.annotation.RetentionPolicy;
import java.lang.annotation.Target;

@Target(ElementType.LOCAL_VARIABLE)
@Retention(RetentionPolicy.SOURCE)
public @interface AutoCleanup {}
"""

JSR305 = "com.google.code.findbugs:jsr305:3.0.2"
SUPPORT = "com.android.support:support-annotations:28.0.0"
ANDROIDX = "androidx.annotation:annotation:1.7.0"
JETBRAINS = "org.jetbrains:annotations:24.0.1"
SPRING_CORE = "org.springframework:spring-core:5.3.30"
SPRING_BEANS = "org.springframework:spring-beans:5.3.30"
LOMBOK = "org.projectlombok:lombok:1.18.30"
JDK = "java:java.base:17"

SPECS = [
    # nullability family
    spec("android.support.annotation.Nullable", SUPPORT, DECL4, Retention.CLASS),
    spec("android.annotation.Nullable", "com.google.android:android:4.1.1.4",
         DECL4, Retention.CLASS),
    spec("androidx.annotation.Nullable", ANDROIDX, DECL4, Retention.CLASS),
    spec("javax.annotation.Nullable", JSR305, DECL4, Retention.RUNTIME),
    spec("org.jetbrains.annotations.Nullable", JETBRAINS,
         DECL4 | {K.TYPE_USE}, Retention.CLASS),
    spec("org.springframework.lang.Nullable", SPRING_CORE,
         {K.FIELD, K.METHOD, K.PARAMETER}, Retention.RUNTIME),
    spec("android.support.annotation.NonNull", SUPPORT, DECL4, Retention.CLASS),
    spec("androidx.annotation.NonNull", ANDROIDX, DECL4, Retention.CLASS),
    spec("javax.annotation.Nonnull", JSR305, DECL4, Retention.RUNTIME),
    spec("org.jetbrains.annotations.NotNull", JETBRAINS,
         DECL4 | {K.TYPE_USE}, Retention.CLASS),
    spec("javax.validation.constraints.NotNull", "javax.validation:validation-api:2.0.1.Final",
         {K.ANNOTATION_TYPE, K.CONSTRUCTOR, K.FIELD, K.METHOD, K.PARAMETER, K.TYPE_USE},
         Retention.RUNTIME),
    spec("javax.annotation.CheckForNull", JSR305, DECL4, Retention.RUNTIME),
    spec("edu.umd.cs.findbugs.annotations.CheckForNull",
         "com.google.code.findbugs:annotations:3.0.1", DECL4, Retention.RUNTIME),
    # core JDK
    spec("java.lang.SuppressWarnings", JDK,
         {K.TYPE, K.FIELD, K.METHOD, K.PARAMETER, K.CONSTRUCTOR, K.LOCAL_VARIABLE, K.MODULE},
         Retention.SOURCE, [p("value", "String[]", default=False)]),
    spec("java.lang.Override", JDK, {K.METHOD}, Retention.SOURCE),
    spec("java.lang.Deprecated", JDK,
         {K.TYPE, K.FIELD, K.METHOD, K.PARAMETER, K.CONSTRUCTOR, K.LOCAL_VARIABLE,
          K.ANNOTATION_TYPE, K.PACKAGE, K.MODULE, K.RECORD_COMPONENT},
         Retention.RUNTIME, [p("since", "String"), p("forRemoval", "boolean")]),
    spec("java.lang.FunctionalInterface", JDK, {K.TYPE}, Retention.RUNTIME),
    spec("java.lang.SafeVarargs", JDK, {K.CONSTRUCTOR, K.METHOD}, Retention.RUNTIME),
    # test markers
    spec("org.junit.Test", "junit:junit:4.13.2", {K.METHOD}, Retention.RUNTIME,
         [p("expected", "Class"), p("timeout", "long")]),
    spec("org.junit.jupiter.api.Test", "org.junit.jupiter:junit-jupiter-api:5.10.0",
         {K.ANNOTATION_TYPE, K.METHOD}, Retention.RUNTIME),
    spec("org.junit.jupiter.api.extension.ExtendWith",
         "org.junit.jupiter:junit-jupiter-api:5.10.0",
         {K.ANNOTATION_TYPE, K.METHOD, K.TYPE}, Retention.RUNTIME,
         [p("value", "Class[]", default=False)]),
    # dependency injection
    spec("javax.inject.Inject", "javax.inject:javax.inject:1",
         {K.CONSTRUCTOR, K.FIELD, K.METHOD}, Retention.RUNTIME),
    spec("com.google.inject.Inject", "com.google.inject:guice:5.1.0",
         {K.CONSTRUCTOR, K.FIELD, K.METHOD}, Retention.RUNTIME,
         [p("optional", "boolean")]),
    spec("jakarta.inject.Inject", "jakarta.inject:jakarta.inject-api:2.0.1",
         {K.CONSTRUCTOR, K.FIELD, K.METHOD}, Retention.RUNTIME),
    spec("org.springframework.beans.factory.annotation.Autowired", SPRING_BEANS,
         {K.ANNOTATION_TYPE, K.CONSTRUCTOR, K.FIELD, K.METHOD, K.PARAMETER},
         Retention.RUNTIME, [p("required", "boolean")]),
    spec("org.springframework.beans.factory.annotation.Value", SPRING_BEANS,
         {K.ANNOTATION_TYPE, K.FIELD, K.METHOD, K.PARAMETER}, Retention.RUNTIME,
         [p("value", "String", default=False)]),
    # lombok structural family (source retention)
    spec("lombok.Data", LOMBOK, {K.TYPE}, Retention.SOURCE,
         [p("staticConstructor", "String")]),
    spec("lombok.Getter", LOMBOK, {K.FIELD}, Retention.SOURCE,
         [p("value", "AccessLevel")]),
    spec("lombok.Setter", LOMBOK, {K.FIELD, K.TYPE}, Retention.SOURCE,
         [p("value", "AccessLevel")]),
    spec("lombok.Value", LOMBOK, {K.TYPE}, Retention.SOURCE,
         [p("staticConstructor", "String")]),
    spec("lombok.Builder", LOMBOK, {K.TYPE, K.METHOD, K.CONSTRUCTOR}, Retention.SOURCE,
         [p("builderMethodName", "String"), p("buildMethodName", "String")]),
    spec("lombok.Cleanup", LOMBOK, {K.LOCAL_VARIABLE}, Retention.SOURCE,
         [p("value", "String")]),
    spec("lombok.NoArgsConstructor", LOMBOK, {K.TYPE}, Retention.SOURCE,
         [p("access", "AccessLevel"), p("force", "boolean"), p("staticName", "String")]),
    spec("lombok.AllArgsConstructor", LOMBOK, {K.TYPE}, Retention.SOURCE,
         [p("access", "AccessLevel"), p("staticName", "String")]),
    spec("lombok.EqualsAndHashCode", LOMBOK, {K.TYPE}, Retention.SOURCE,
         [p("callSuper", "boolean"), p("doNotUseGetters", "boolean")]),
    spec("lombok.extern.slf4j.Slf4j", LOMBOK, {K.TYPE}, Retention.SOURCE,
         [p("topic", "String")]),
    # concurrency contracts
    spec("javax.annotation.concurrent.Immutable", JSR305, {K.TYPE}, Retention.CLASS),
    spec("javax.annotation.concurrent.ThreadSafe", JSR305, {K.TYPE}, Retention.CLASS),
    # code-generation markers across library versions
    spec("javax.annotation.Generated", "javax.annotation:javax.annotation-api:1.3.2",
         {K.ANNOTATION_TYPE, K.CONSTRUCTOR, K.FIELD, K.LOCAL_VARIABLE, K.METHOD,
          K.PACKAGE, K.PARAMETER, K.TYPE},
         Retention.SOURCE,
         [p("value", "String[]", default=False), p("comments", "String"), p("date", "String")]),
    spec("javax.annotation.processing.Generated", "java:java.compiler:17",
         {K.ANNOTATION_TYPE, K.CONSTRUCTOR, K.FIELD, K.LOCAL_VARIABLE, K.METHOD,
          K.PACKAGE, K.PARAMETER, K.TYPE},
         Retention.SOURCE,
         [p("value", "String[]", default=False), p("comments", "String"), p("date", "String")]),
    # guava
    spec("com.google.common.annotations.VisibleForTesting",
         "com.google.guava:guava:32.1.2-jre",
         {K.TYPE, K.FIELD, K.METHOD, K.CONSTRUCTOR}, Retention.CLASS),
    # framework-shipped fixtures
    DUMMY_SPEC,
    spec("io.annaforge.anno.GenerateNoArgsCtor", "io.annaforge:annaforge-fixtures:0",
         {K.TYPE}, Retention.SOURCE, define=GEN_CTOR_DEF),
    spec("io.annaforge.anno.GenerateGetter", "io.annaforge:annaforge-fixtures:0",
         {K.FIELD}, Retention.SOURCE, define=GEN_GETTER_DEF),
    spec("io.annaforge.anno.AutoCleanup", "io.annaforge:annaforge-fixtures:0",
         {K.LOCAL_VARIABLE}, Retention.SOURCE, define=AUTO_CLEANUP_DEF),
]

TUPLES = [
    EquivalenceTuple("nullable",
                     ("android.support.annotation.Nullable", "android.annotation.Nullable"),
                     verified=True,
                     rationale="same nullability contract shipped by two Android libraries"),
    EquivalenceTuple("nonnull",
                     ("android.support.annotation.NonNull", "androidx.annotation.NonNull"),
                     verified=True,
                     rationale="support-library annotation renamed under androidx"),
    EquivalenceTuple("inject",
                     ("javax.inject.Inject", "com.google.inject.Inject"),
                     verified=True,
                     rationale="constructor/field injection markers with identical use"),
    EquivalenceTuple("inject-jakarta",
                     ("javax.inject.Inject", "jakarta.inject.Inject"),
                     verified=True,
                     rationale="javax namespace migrated to jakarta"),
    EquivalenceTuple("checkfornull",
                     ("javax.annotation.CheckForNull",
                      "edu.umd.cs.findbugs.annotations.CheckForNull"),
                     verified=True,
                     rationale="two packagings of the same defect-detection hint"),
    EquivalenceTuple("generated",
                     ("javax.annotation.Generated", "javax.annotation.processing.Generated"),
                     verified=True,
                     rationale="code-generator marker moved between JDK packages"),
]


def build() -> Registry:
    reg = Registry(source="curated")
    for s in SPECS:
        s.validate()
        if s.fq_name in reg.annotations:
            raise SystemExit(f"duplicate spec {s.fq_name}")
        reg.annotations[s.fq_name] = s
    for t in TUPLES:
        t.validate(reg.annotations)
        reg.tuples[t.name] = t
    return reg


def main() -> None:
    reg = build()
    text = write_registry(reg)
    reparsed = load_registry_text(text)
    assert reparsed.annotations == reg.annotations, "round-trip drift (annotations)"
    assert reparsed.tuples == reg.tuples, "round-trip drift (tuples)"
    out = Path(__file__).resolve().parents[1] / "src" / "annaforge" / "data" / "registry.txt"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    print(f"wrote {out} ({len(reg.annotations)} annotations, {len(reg.tuples)} tuples)")


if __name__ == "__main__":
    main()
