JNIEXPORT void JNICALL Java_Gate_nativeRun(JNIEnv *env, jclass cls, jobject data) {
    Frame *frame = env->GetDirectBufferAddress(data);
    char *src = frame->bytes;
    char *dst = frame->scratch;
    if (sizeof(dst) > 4) {
        dst = src;
    }
}
